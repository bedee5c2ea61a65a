#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "lfbm/covariance.hpp"
#include "lfbm/grid.hpp"

namespace lfbm {

enum class SampleScheme { cholesky, moving_average };

/// Batch of sampled paths over the grid nodes t_1..t_n; W(0) = 0 is implicit.
/// Path r is a deterministic function of (master_seed, r) only.
class PathEnsemble {
public:
    PathEnsemble(TimeGrid grid, std::size_t n_paths, std::uint64_t master_seed,
                 SampleScheme scheme, HurstOrder beta, CovKind kind);

    const TimeGrid& grid() const { return grid_; }
    std::size_t n_paths() const { return n_paths_; }
    std::size_t n_nodes() const { return grid_.n_cells(); }
    std::uint64_t master_seed() const { return master_seed_; }
    SampleScheme scheme() const { return scheme_; }
    const HurstOrder& beta() const { return beta_; }
    CovKind kind() const { return kind_; }

    std::span<const double> path(std::size_t r) const {
        return {values_.data() + r * n_nodes(), n_nodes()};
    }
    std::span<double> mutable_path(std::size_t r) {
        return {values_.data() + r * n_nodes(), n_nodes()};
    }

    /// Increment over cell j (0-based) of path r, with W(t_0) = 0.
    double increment(std::size_t r, std::size_t j) const {
        auto p = path(r);
        return j == 0 ? p[0] : p[j] - p[j - 1];
    }

private:
    TimeGrid grid_;
    std::size_t n_paths_;
    std::uint64_t master_seed_;
    SampleScheme scheme_;
    HurstOrder beta_;
    CovKind kind_;
    std::vector<double> values_;
};

struct SampleDiagnostics {
    double jitter_used = 0.0;
};

/// Exact-law Gaussian sampling through a Cholesky factor of the covariance
/// matrix. Throws if the matrix is not numerically PSD within the jitter cap
/// 1e-12 * max diagonal.
PathEnsemble sample_cholesky(const TimeGrid& grid, const HurstOrder& beta, CovKind kind,
                             std::size_t n_paths, std::uint64_t master_seed,
                             SampleDiagnostics* diag = nullptr);

/// Moving-average scheme W(t_i) = sum_{j<=i} a_{ij} xi_j with
/// a_{ij}^2 = int_{cell j} (t_i-u)^{2b-1} du / Gamma(b+1/2)^2, so the node
/// variances match cov_liouville(t_i,t_i) exactly; cross-covariances converge
/// under refinement. Liouville kind only.
PathEnsemble sample_moving_average(const TimeGrid& grid, const HurstOrder& beta,
                                   std::size_t n_paths, std::uint64_t master_seed);

/// The moving-average coefficient table (n x n lower triangular, row-major);
/// exposed for tests.
std::vector<double> moving_average_coefficients(const TimeGrid& grid, const HurstOrder& beta);

} // namespace lfbm
