#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lfbm/isometry.hpp"

namespace lfbm {

/// Operator from an m-dimensional noise space to an e-dimensional state
/// space; with Euclidean state space the gamma-radonifying norm is the
/// Hilbert-Schmidt norm.
class FiniteRankMap {
public:
    FiniteRankMap(std::size_t dim_state, std::size_t dim_noise);
    FiniteRankMap(std::size_t dim_state, std::size_t dim_noise, std::vector<double> entries);

    std::size_t dim_state() const { return e_; }
    std::size_t dim_noise() const { return m_; }
    double& at(std::size_t p, std::size_t q) { return a_[p * m_ + q]; }
    double at(std::size_t p, std::size_t q) const { return a_[p * m_ + q]; }
    const std::vector<double>& entries() const { return a_; }

    double hs_norm() const;
    double op_norm() const; // largest singular value

    FiniteRankMap scaled(double c) const;
    FiniteRankMap operator+(const FiniteRankMap& o) const;
    /// Composition this * other (state dims must chain).
    FiniteRankMap compose(const FiniteRankMap& o) const;

    /// Rank-one h (x) x : h' -> <h',h> x.
    static FiniteRankMap rank_one(const std::vector<double>& x, const std::vector<double>& h);

private:
    std::size_t e_, m_;
    std::vector<double> a_; // row-major e x m
};

/// Piecewise-constant operator-valued integrand Phi: one map per grid cell.
class OperatorPath {
public:
    OperatorPath(TimeGrid grid, std::vector<FiniteRankMap> cells);

    const TimeGrid& grid() const { return grid_; }
    const FiniteRankMap& cell(std::size_t j) const { return cells_[j]; }
    std::size_t dim_state() const { return cells_.front().dim_state(); }
    std::size_t dim_noise() const { return cells_.front().dim_noise(); }

    /// Scalar step function of entry (p, q).
    StepFunction entry_function(std::size_t p, std::size_t q) const;
    /// Cells scaled by the cell averages of t^alpha.
    OperatorPath weighted_by_power(double alpha) const;

private:
    TimeGrid grid_;
    std::vector<FiniteRankMap> cells_;
};

/// Smooth operator-valued integrand supplied as a (value, derivative)
/// evaluator pair, as Theorem-style sufficient conditions require.
struct SmoothOperatorPath {
    std::size_t dim_state = 0;
    std::size_t dim_noise = 0;
    std::function<FiniteRankMap(double)> value;
    std::function<FiniteRankMap(double)> derivative;

    /// Midpoint discretization onto `grid`.
    OperatorPath discretize(const TimeGrid& grid) const;
};

/// m independent scalar Liouville fBm ensembles sharing grid, order and the
/// master-seed derivation hash(master, coordinate, replicate).
class CylindricalEnsemble {
public:
    CylindricalEnsemble(const TimeGrid& grid, const HurstOrder& beta, std::size_t dim_noise,
                        std::size_t n_paths, std::uint64_t master_seed);

    const TimeGrid& grid() const { return coords_.front().grid(); }
    const HurstOrder& beta() const { return coords_.front().beta(); }
    std::size_t dim_noise() const { return coords_.size(); }
    std::size_t n_paths() const { return coords_.front().n_paths(); }
    const PathEnsemble& coordinate(std::size_t q) const { return coords_[q]; }

private:
    std::vector<PathEnsemble> coords_;
};

/// ||R_Phi||: Hilbert-Schmidt norm of the representation operator, assembled
/// entrywise from scalar isometry norms through the tensor structure.
double representation_norm(const OperatorPath& phi, const HurstOrder& beta);

struct VectorMcResult {
    std::vector<std::vector<double>> outcomes; // per path, E-valued
    McEstimate norm_sq;                        // statistics of ||outcome||^2
    std::vector<double> coordinate_means;
};

VectorMcResult integrate_vector_mc(const OperatorPath& phi, const CylindricalEnsemble& ens);

struct SuffConditionResult {
    double bound = 0.0;  // C_b T^b ||Phi(T-)|| + C_b int t^b ||Phi'(t)|| dt
    double actual = 0.0; // representation norm of the discretized Phi
};

/// Theorem-3.10-style sufficient bound for beta < 1/2. The supplied
/// derivative is cross-checked against finite differences (tolerance 1e-6)
/// before use.
SuffConditionResult suff_condition_bound(const SmoothOperatorPath& phi, const HurstOrder& beta,
                                         const TimeGrid& grid);

struct DominationResult {
    double liouville_norm = 0.0; // representation norm at order beta
    double brownian_norm = 0.0;  // representation norm at order 1/2
    double weighted_liouville_norm = 0.0; // t^alpha Phi(t) at order beta (beta > 1/2 branch)
    bool has_weighted = false;
};

/// Corollary-3.8 / Theorem-3.11 norm pairs. For beta > 1/2 pass
/// 0 <= alpha < beta - 1/2 to also get the norm of t^alpha Phi(t).
DominationResult domination_check(const OperatorPath& phi, const HurstOrder& beta,
                                  double alpha = -1.0);

} // namespace lfbm
