#include "lfbm/sampling.hpp"

#include <cmath>

#include "lfbm/rng.hpp"

namespace lfbm {

PathEnsemble::PathEnsemble(TimeGrid grid, std::size_t n_paths, std::uint64_t master_seed,
                           SampleScheme scheme, HurstOrder beta, CovKind kind)
    : grid_(grid), n_paths_(n_paths), master_seed_(master_seed), scheme_(scheme), beta_(beta),
      kind_(kind), values_(n_paths * grid.n_cells(), 0.0) {
    if (n_paths == 0) throw std::invalid_argument("PathEnsemble: n_paths must be positive");
    if (grid.t_start() != 0.0)
        throw std::invalid_argument("PathEnsemble: processes start at t = 0");
}

PathEnsemble sample_cholesky(const TimeGrid& grid, const HurstOrder& beta, CovKind kind,
                             std::size_t n_paths, std::uint64_t master_seed,
                             SampleDiagnostics* diag) {
    const SymMatrix cov = covariance_matrix(grid, beta, kind);
    const CholeskyResult ch = cholesky_with_jitter(cov);
    if (!ch.ok)
        throw std::runtime_error("sample_cholesky: covariance not numerically PSD "
                                 "within the jitter cap");
    if (diag) diag->jitter_used = ch.jitter;

    PathEnsemble ens(grid, n_paths, master_seed, SampleScheme::cholesky, beta, kind);
    const std::size_t n = grid.n_cells();
    std::vector<double> z(n);
    for (std::size_t r = 0; r < n_paths; ++r) {
        GaussianStream gs(derive_seed(master_seed, r));
        for (std::size_t i = 0; i < n; ++i) z[i] = gs.next();
        lower_tri_matvec(ch.lower, n, z, ens.mutable_path(r));
    }
    return ens;
}

std::vector<double> moving_average_coefficients(const TimeGrid& grid, const HurstOrder& beta) {
    const std::size_t n = grid.n_cells();
    const double b = beta.beta();
    const double g = std::tgamma(b + 0.5);
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = grid.node(i + 1);
        for (std::size_t j = 0; j <= i; ++j) {
            // exact cell integral of (t_i - u)^{2b-1}
            const double lo = ti - grid.node(j);
            const double hi = ti - grid.node(j + 1);
            const double cell = (std::pow(lo, 2.0 * b) - std::pow(hi, 2.0 * b)) / (2.0 * b);
            a[i * n + j] = std::sqrt(cell) / g;
        }
    }
    return a;
}

PathEnsemble sample_moving_average(const TimeGrid& grid, const HurstOrder& beta,
                                   std::size_t n_paths, std::uint64_t master_seed) {
    PathEnsemble ens(grid, n_paths, master_seed, SampleScheme::moving_average, beta,
                     CovKind::liouville);
    const std::size_t n = grid.n_cells();
    const std::vector<double> a = moving_average_coefficients(grid, beta);
    std::vector<double> xi(n);
    for (std::size_t r = 0; r < n_paths; ++r) {
        GaussianStream gs(derive_seed(master_seed, r));
        for (std::size_t j = 0; j < n; ++j) xi[j] = gs.next();
        auto p = ens.mutable_path(r);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const double* row = a.data() + i * n;
            for (std::size_t j = 0; j <= i; ++j) s += row[j] * xi[j];
            p[i] = s;
        }
    }
    return ens;
}

} // namespace lfbm
