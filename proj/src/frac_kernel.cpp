#include "lfbm/frac_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace lfbm {
namespace {

// Toeplitz coefficients by lag d for the left kernel with evaluation offset
// delta in units of dt (delta = 1: right-endpoint nodes, 1/2: midpoints).
// coef(d) = dt^alpha [ (d+delta)^alpha - (d-1+delta)^alpha ] / Gamma(alpha+1), d >= 1
// coef(0) = (delta*dt)^alpha / Gamma(alpha+1)   (partial cell up to the eval point)
std::vector<double> toeplitz_coefs(std::size_t n, double dt, double alpha, double delta) {
    std::vector<double> c(n);
    const double g = std::tgamma(alpha + 1.0);
    const double da = std::pow(dt, alpha);
    c[0] = std::pow(delta * dt, alpha) / g;
    double prev = std::pow(delta, alpha);
    for (std::size_t d = 1; d < n; ++d) {
        const double cur = std::pow(static_cast<double>(d) + delta, alpha);
        c[d] = da * (cur - prev) / g;
        prev = cur;
    }
    return c;
}

} // namespace

FracKernelMatrix::FracKernelMatrix(TimeGrid grid, double alpha, Side side, EvalPoint eval)
    : grid_(grid), alpha_(alpha), side_(side), eval_(eval) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("FracKernelMatrix: alpha must lie in (0,1)");
    const double delta = (eval == EvalPoint::node) ? 1.0 : 0.5;
    coefs_ = toeplitz_coefs(grid_.n_cells(), grid_.dt(), alpha, delta);
}

FracKernelMatrix build_kernel(const TimeGrid& grid, double alpha, Side side, EvalPoint eval) {
    return FracKernelMatrix(grid, alpha, side, eval);
}

double FracKernelMatrix::at(std::size_t i, std::size_t j) const {
    const std::size_t n = grid_.n_cells();
    if (i >= n || j >= n) throw std::out_of_range("FracKernelMatrix::at");
    if (side_ == Side::left) {
        if (j > i) return 0.0;
        return coefs_[i - j];
    }
    // right matrix is the reflection of the left one
    if (j < i) return 0.0;
    return coefs_[j - i];
}

std::vector<double> FracKernelMatrix::apply(const StepFunction& f) const {
    if (!(f.grid() == grid_))
        throw std::invalid_argument("FracKernelMatrix::apply: grid mismatch");
    const std::size_t n = grid_.n_cells();
    const auto& v = f.values();
    std::vector<double> out(n, 0.0);
    if (side_ == Side::left) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= i; ++j) s += coefs_[i - j] * v[j];
            out[i] = s;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = i; j < n; ++j) s += coefs_[j - i] * v[j];
            out[i] = s;
        }
    }
    return out;
}

StepFunction FracKernelMatrix::solve(const std::vector<double>& g) const {
    const std::size_t n = grid_.n_cells();
    if (g.size() != n) throw std::invalid_argument("FracKernelMatrix::solve: size mismatch");
    if (eval_ != EvalPoint::node)
        throw std::invalid_argument("FracKernelMatrix::solve: node-evaluated kernel required");
    const double floor = 1e-14 * std::pow(grid_.dt(), alpha_);
    if (!(coefs_[0] >= floor))
        throw std::runtime_error("FracKernelMatrix::solve: ill-conditioned diagonal");
    std::vector<double> f(n, 0.0);
    if (side_ == Side::left) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = g[i];
            for (std::size_t j = 0; j < i; ++j) s -= coefs_[i - j] * f[j];
            f[i] = s / coefs_[0];
        }
    } else {
        for (std::size_t ii = n; ii-- > 0;) {
            double s = g[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= coefs_[j - ii] * f[j];
            f[ii] = s / coefs_[0];
        }
    }
    return StepFunction(grid_, std::move(f));
}

double h_norm(const StepFunction& f, double alpha, Side side) {
    if (!(alpha > -1.0 && alpha < 1.0))
        throw std::invalid_argument("h_norm: alpha must lie in (-1,1)");
    if (alpha == 0.0) return f.l2_norm();
    const TimeGrid& grid = f.grid();
    if (alpha > 0.0) {
        FracKernelMatrix k(grid, alpha, side);
        return k.solve(f.values()).l2_norm();
    }
    FracKernelMatrix k(grid, -alpha, side);
    return StepFunction(grid, k.apply(f)).l2_norm();
}

} // namespace lfbm
