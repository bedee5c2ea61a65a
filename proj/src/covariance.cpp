#include "lfbm/covariance.hpp"

#include <cmath>
#include <stdexcept>

#include "lfbm/quadrature.hpp"

namespace lfbm {

HurstOrder::HurstOrder(double beta) : beta_(beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("HurstOrder: beta must lie in (0,1)");
}

bool HurstOrder::is_brownian() const { return std::abs(beta_ - 0.5) < 1e-14; }

double cov_liouville(double s, double t, const HurstOrder& beta) {
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("cov_liouville: negative time");
    const double m = std::min(s, t);
    const double M = std::max(s, t);
    if (m <= 0.0) return 0.0;
    if (beta.is_brownian()) return m;
    const double b = beta.beta();
    const double g = std::tgamma(b + 0.5);
    if (m == M) return std::pow(m, 2.0 * b) / (2.0 * b * g * g);
    // int_0^m w^c (d+w)^c dw with c = b-1/2, d = M-m; substitute w = z^{1/p},
    // p = b+1/2, which removes the w->0 endpoint singularity for b < 1/2.
    const double c = b - 0.5;
    const double d = M - m;
    const double p = b + 0.5;
    const double zmax = std::pow(m, p);
    const double scale = zmax * std::pow(std::max(d, m), c); // crude integrand scale
    const double tol = std::max(1e-13 * std::abs(scale), 1e-15);
    const double I = integrate_adaptive(
        [&](double z) { return std::pow(d + std::pow(z, 1.0 / p), c); }, 0.0, zmax, tol);
    return I / p / (g * g);
}

double cov_classical(double s, double t, const HurstOrder& beta, ClassicalNorm norm) {
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("cov_classical: negative time");
    const double b2 = 2.0 * beta.beta();
    const double v = std::pow(s, b2) + std::pow(t, b2) - std::pow(std::abs(t - s), b2);
    return norm == ClassicalNorm::as_printed ? v : 0.5 * v;
}

SymMatrix covariance_matrix(const TimeGrid& grid, const HurstOrder& beta, CovKind kind,
                            ClassicalNorm norm) {
    const std::size_t n = grid.n_cells();
    SymMatrix m;
    m.n = n;
    m.a.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double ti = grid.node(i + 1);
            const double tj = grid.node(j + 1);
            const double v = (kind == CovKind::liouville) ? cov_liouville(ti, tj, beta)
                                                          : cov_classical(ti, tj, beta, norm);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return m;
}

} // namespace lfbm
