#include "lfbm/isometry.hpp"

#include <cmath>
#include <stdexcept>

#include "lfbm/frac_kernel.hpp"
#include "lfbm/quadrature.hpp"
#include "lfbm/rng.hpp"

namespace lfbm {

IntegrandRegime regime_of(const HurstOrder& beta) {
    if (beta.is_brownian()) return IntegrandRegime::brownian;
    return beta.beta() < 0.5 ? IntegrandRegime::below_half : IntegrandRegime::above_half;
}

namespace {

// g(s) = sum_{k >= k0} d[k] (t_{k+1} - s)^{b-1/2} / Gamma(b+1/2), cells 0-based.
struct TransformSum {
    const TimeGrid* grid;
    std::vector<double> d; // d[k] = f_k - f_{k+1}, last entry f_n
    double expo;           // beta - 1/2
    double inv_gamma;

    double eval(double s, std::size_t from_cell) const {
        double acc = 0.0;
        for (std::size_t k = from_cell; k < d.size(); ++k) {
            if (d[k] == 0.0) continue;
            acc += d[k] * std::pow(grid->node(k + 1) - s, expo);
        }
        return acc * inv_gamma;
    }

    bool tail_zero(std::size_t from_cell) const {
        for (std::size_t k = from_cell; k < d.size(); ++k)
            if (d[k] != 0.0) return false;
        return true;
    }
};

double isometry_norm_sq_fractional(const StepFunction& f, double beta) {
    const TimeGrid& grid = f.grid();
    const std::size_t n = grid.n_cells();
    const double dt = grid.dt();

    TransformSum ts;
    ts.grid = &grid;
    ts.expo = beta - 0.5;
    ts.inv_gamma = 1.0 / std::tgamma(beta + 0.5);
    ts.d.resize(n);
    for (std::size_t k = 0; k + 1 < n; ++k) ts.d[k] = f.value(k) - f.value(k + 1);
    ts.d[n - 1] = f.value(n - 1);

    // substitution exponent: z = (t_cell_end - s)^q
    const double q = beta < 0.5 ? 2.0 * beta : beta - 0.5;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ts.tail_zero(i)) break; // g vanishes on later cells too
        const double t_hi = grid.node(i + 1);
        const double di = ts.d[i] * ts.inv_gamma;
        double cell;
        if (di == 0.0) {
            // no singular node at the cell's right end; integrand is smooth here
            auto f2 = [&](double s) {
                const double v = ts.eval(s, i + 1);
                return v * v;
            };
            cell = integrate_adaptive(f2, t_hi - dt, t_hi, 1e-14, 48);
        } else {
            const double zmax = std::pow(dt, q);
            auto f2 = [&](double z) {
                if (z <= 0.0) {
                    // limit: only the own singular term survives for beta<1/2;
                    // for beta>1/2 the jacobian factor vanishes
                    return beta < 0.5 ? di * di / q : 0.0;
                }
                const double x = std::pow(z, 1.0 / q); // t_hi - s
                const double s = t_hi - x;
                double v = di * std::pow(x, ts.expo) + ts.eval(s, i + 1);
                return v * v * std::pow(z, 1.0 / q - 1.0) / q;
            };
            cell = integrate_adaptive(f2, 0.0, zmax, 1e-14, 48);
        }
        total += cell;
    }
    return total;
}

} // namespace

double isometry_norm(const StepFunction& f, const HurstOrder& beta) {
    switch (regime_of(beta)) {
    case IntegrandRegime::brownian:
        return f.l2_norm();
    default:
        return std::sqrt(std::max(0.0, isometry_norm_sq_fractional(f, beta.beta())));
    }
}

std::vector<double> integrate_paths(const StepFunction& f, const PathEnsemble& ensemble) {
    if (!(f.grid() == ensemble.grid()))
        throw std::invalid_argument("integrate_mc: grid mismatch");
    const std::size_t n = f.size();
    std::vector<double> out(ensemble.n_paths());
    for (std::size_t r = 0; r < ensemble.n_paths(); ++r) {
        auto p = ensemble.path(r);
        double prev = 0.0, acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += f.value(j) * (p[j] - prev);
            prev = p[j];
        }
        out[r] = acc;
    }
    return out;
}

McEstimate integrate_mc(const StepFunction& f, const HurstOrder& beta,
                        const PathEnsemble& ensemble) {
    if (std::abs(beta.beta() - ensemble.beta().beta()) > 0.0)
        throw std::invalid_argument("integrate_mc: beta mismatch");
    if (ensemble.n_paths() < 2) throw std::invalid_argument("integrate_mc: need n_paths >= 2");
    const std::vector<double> vals = integrate_paths(f, ensemble);
    const MomentStats ms = moments(vals);
    McEstimate e;
    e.mean = ms.mean;
    e.variance = ms.variance;
    e.std_error = ms.se_variance;
    e.mean_std_error = ms.se_mean;
    e.n_paths = vals.size();
    return e;
}

namespace {

// Discrete transform norm^2 of the cell-averaged integrand (L-r)^{-alpha} on
// (0, L) with n cells.
double kernel_var_sq_level(double alpha, const HurstOrder& beta, double L, std::size_t n) {
    TimeGrid grid(0.0, L, n);
    const double dt = grid.dt();
    std::vector<double> fbar(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = L - grid.node(j);
        const double hi = L - grid.node(j + 1);
        if (alpha == 0.0) {
            fbar[j] = 1.0;
        } else {
            fbar[j] = (std::pow(lo, 1.0 - alpha) - std::pow(hi, 1.0 - alpha)) /
                      ((1.0 - alpha) * dt);
        }
    }
    StepFunction f(grid, std::move(fbar));
    switch (regime_of(beta)) {
    case IntegrandRegime::brownian: {
        const double v = f.l2_norm();
        return v * v;
    }
    case IntegrandRegime::below_half: {
        FracKernelMatrix k(grid, 0.5 - beta.beta(), Side::right);
        const double v = k.solve(f.values()).l2_norm();
        return v * v;
    }
    case IntegrandRegime::above_half: {
        FracKernelMatrix k(grid, beta.beta() - 0.5, Side::right, EvalPoint::midpoint);
        const double v = StepFunction(grid, k.apply(f)).l2_norm();
        return v * v;
    }
    }
    return 0.0;
}

// Aitken extrapolation from three grid levels (n, 2n, 4n).
double richardson3(double v1, double v2, double v4) {
    const double d1 = v1 - v2;
    const double d2 = v2 - v4;
    if (d2 == 0.0 || !std::isfinite(d1 / d2)) return v4;
    const double r = d1 / d2;
    if (std::abs(r - 1.0) < 1e-9 || r <= 1.0) return v4; // no measurable convergence order
    return v4 + (v4 - v2) / (r - 1.0);
}

} // namespace

double kernel_variance(double s, double t, double alpha, const HurstOrder& beta) {
    if (!(s >= 0.0 && s < t)) throw std::invalid_argument("kernel_variance: need 0 <= s < t");
    const double amax = std::min(beta.beta() + 0.5, 1.0);
    if (!(alpha >= 0.0 && alpha < amax))
        throw std::invalid_argument("kernel_variance: alpha outside [0, min(beta+1/2, 1))");
    const double L = t - s;
    const double v1 = kernel_var_sq_level(alpha, beta, L, 512);
    const double v2 = kernel_var_sq_level(alpha, beta, L, 1024);
    const double v4 = kernel_var_sq_level(alpha, beta, L, 2048);
    return std::sqrt(std::max(0.0, richardson3(v1, v2, v4)));
}

double kernel_variance_constant(double alpha, const HurstOrder& beta, double len) {
    return kernel_variance(0.0, len, alpha, beta) / std::pow(len, beta.beta() - alpha);
}

double classical_variance_form(const StepFunction& f, const HurstOrder& beta,
                               ClassicalNorm norm) {
    const TimeGrid& grid = f.grid();
    const std::size_t n = grid.n_cells();
    std::vector<double> R((n + 1) * (n + 1));
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = cov_classical(grid.node(i), grid.node(j), beta, norm);
            R[i * (n + 1) + j] = v;
            R[j * (n + 1) + i] = v;
        }
    auto inc = [&](std::size_t i, std::size_t j) {
        return R[(i + 1) * (n + 1) + (j + 1)] - R[i * (n + 1) + (j + 1)] -
               R[(i + 1) * (n + 1) + j] + R[i * (n + 1) + j];
    };
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc += f.value(i) * f.value(j) * inc(i, j);
    return acc;
}

std::vector<RatioBracket> norm_equivalence_report(const std::vector<double>& betas,
                                                  std::size_t f_samples, std::uint64_t seed,
                                                  const TimeGrid& grid) {
    std::vector<RatioBracket> out;
    for (double b : betas) {
        if (!(b < 0.5))
            throw std::invalid_argument(
                "norm_equivalence_report: requires beta < 1/2 (the spaces differ above)");
        HurstOrder beta(b);
        RatioBracket rb;
        rb.beta = b;
        rb.f_samples = f_samples;
        double lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < f_samples; ++i) {
            GaussianStream gs(derive_seed(seed, i));
            std::vector<double> v(grid.n_cells());
            for (double& x : v) x = gs.next();
            StepFunction f(grid, std::move(v));
            const double num = classical_variance_form(f, beta);
            const double den = isometry_norm(f, beta);
            const double ratio = num / (den * den);
            if (i == 0) {
                lo = hi = ratio;
            } else {
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        rb.ratio_min = lo;
        rb.ratio_max = hi;
        out.push_back(rb);
    }
    return out;
}

} // namespace lfbm
