#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lfbm/covariance.hpp"
#include "lfbm/grid.hpp"

namespace lfbm {

/// Spectral Galerkin model for dU = AU dt + B dW^beta on (0,1)^d with the
/// Dirichlet Laplacian eigenbasis: lambda_k = sum_i k_i^2 pi^2, modes sorted
/// by eigenvalue. Noise coefficients b_k = lambda_k^{-noise_rho}
/// (noise_rho = 0 is identity noise).
struct GalerkinModel {
    int d = 1;
    std::size_t K = 1;
    double theta = 0.0;
    double noise_rho = 0.0;

    std::vector<double> eigenvalues() const;
    std::vector<double> noise_coeffs() const;
};

/// Sorted Dirichlet eigenvalues on (0,1)^d, first K of them.
std::vector<double> dirichlet_eigenvalues(int d, std::size_t K);

/// Var X(t) for the stochastic convolution int_0^t e^{-lambda(t-s)} dW^beta(s):
/// the squared regime-transform norm, evaluated on the rescaled problem
/// (0, min(lambda t, 64)) with three grid levels plus Richardson, plus the
/// closed-form power tail of the transform beyond the window.
/// Exact closed form (1-e^{-2 lambda t})/(2 lambda) at beta = 1/2.
double mode_variance(double lambda, double t, const HurstOrder& beta);

/// One realized mild-solution path: per-mode trajectories on the grid nodes.
class MildSolutionPath {
public:
    MildSolutionPath(TimeGrid grid, std::size_t n_modes);

    const TimeGrid& grid() const { return grid_; }
    std::size_t n_modes() const { return K_; }
    std::span<double> mode(std::size_t k) { return {x_.data() + k * n_, n_}; }
    std::span<const double> mode(std::size_t k) const { return {x_.data() + k * n_, n_}; }

    /// ||U(t_i)||_{E_theta}^2 = sum_k lambda_k^{2 theta} X_k(t_i)^2.
    double e_theta_norm_sq(std::size_t node, double theta,
                           const std::vector<double>& eigenvalues) const;

private:
    TimeGrid grid_;
    std::size_t K_;
    std::size_t n_;
    std::vector<double> x_;
};

/// Streaming consumer of per-mode path data; X contains X_k(t_1..t_n).
using ModePathObserver =
    std::function<void(std::size_t mode, std::size_t path, std::span<const double> X)>;

struct SimulateOptions {
    std::size_t noise_refine = 8; // noise cells per simulation cell
};

struct SimulateDiagnostics {
    double max_lambda_dt_noise = 0.0; // max over modes of lambda * noise dt
    bool under_resolved = false;      // true when the warning threshold 10 was crossed
};

/// Drive the spectral mild solution: for every mode k and node t_i the value
/// X_k(t_i) = b_k sqrt(dt_N) sum_J g^{(k,i)}_J xi_{k,J}, where g^{(k,i)} is the
/// regime transform of s -> e^{-lambda_k (t_i - s)} 1_{(0,t_i)} projected onto
/// the refined noise grid (exact cell averages of the integrand). xi streams
/// derive from hash(master_seed, mode, path).
void simulate_mild_stream(const GalerkinModel& model, const TimeGrid& grid,
                          const HurstOrder& beta, std::size_t n_paths,
                          std::uint64_t master_seed, const ModePathObserver& observer,
                          const SimulateOptions& opts = {},
                          SimulateDiagnostics* diag = nullptr);

/// Materialized variant (memory-guarded: K * n_nodes * n_paths must stay
/// below ~3e8 doubles).
std::vector<MildSolutionPath> simulate_mild(const GalerkinModel& model, const TimeGrid& grid,
                                            const HurstOrder& beta, std::size_t n_paths,
                                            std::uint64_t master_seed,
                                            const SimulateOptions& opts = {},
                                            SimulateDiagnostics* diag = nullptr);

/// Var X(t_i) of the discretized convolution for every node: the exact law of
/// the sampler (dt_N ||g^{(i)}||^2, unit noise coefficient). The gap to
/// mode_variance is the sampler's discretization bias.
std::vector<double> discrete_mode_variances(double lambda, const TimeGrid& grid,
                                            const HurstOrder& beta, std::size_t noise_refine);

/// Per-mode second-moment statistics accumulated across paths: structure
/// functions SF_k[m] = mean over (paths, window t_i) of (X_k(t_i+m)-X_k(t_i))^2
/// for lags m = 1..max_lag, plus per-node variances.
class ModeStatsAccumulator {
public:
    ModeStatsAccumulator(const GalerkinModel& model, const TimeGrid& grid, std::size_t max_lag);

    void operator()(std::size_t mode, std::size_t path, std::span<const double> X);

    std::size_t max_lag() const { return max_lag_; }
    std::size_t n_paths_seen() const;
    /// Mean and across-path variance of the windowed structure function.
    double sf_mean(std::size_t mode, std::size_t lag) const;
    double sf_var(std::size_t mode, std::size_t lag) const;
    /// Per-node mean of X_k(t_i)^2 and its across-path variance.
    double node_sq_mean(std::size_t mode, std::size_t node) const;
    double node_sq_var(std::size_t mode, std::size_t node) const;

    const TimeGrid& grid() const { return grid_; }
    const GalerkinModel& model() const { return model_; }

private:
    GalerkinModel model_;
    TimeGrid grid_;
    std::size_t max_lag_;
    std::size_t n_;
    std::vector<double> sf_sum_, sf_sum2_;     // K x max_lag
    std::vector<double> node_sum_, node_sum2_; // K x n
    std::vector<std::size_t> count_;           // per mode
};

enum class RegularityStatus { ok, threshold_violation };

struct RegularityEstimate {
    RegularityStatus status = RegularityStatus::ok;
    double holder_exponent = 0.0; // slope/2 of the structure function
    double tail_exponent = 0.0;   // weighted modal tail exponent behind the status
    std::vector<double> lags;     // h values used
    std::vector<double> structure; // S(h), assembled at the requested theta
    std::vector<double> structure_se;
};

/// Log-log regression of the E_theta structure function, h in
/// [2^-9, 2^-4] * T intersected with the grid. Refuses (reports a threshold
/// violation) when the theta-weighted modal series diverges; throws on a
/// degenerate h-range.
RegularityEstimate regularity_estimate(const ModeStatsAccumulator& stats, double theta);

/// Same estimate from materialized paths.
RegularityEstimate regularity_estimate(const std::vector<MildSolutionPath>& paths,
                                       const GalerkinModel& model, double theta);

struct ThresholdRow {
    double beta = 0.0;
    std::vector<double> partial_sums; // aligned with K_list
    double tail_exponent_sorted = 0.0; // vs sorted mode index; < -1 <=> convergent
    double tail_exponent_radial = 0.0; // vs sqrt(lambda)/pi; ~ -4 beta + 4 theta
    bool convergent = false;
};

/// Partial sums sum_{k<=K} lambda_k^{2 theta} mode_variance(lambda_k, T, beta)
/// across K_list, with fitted modal tail exponents.
std::vector<ThresholdRow> existence_threshold_scan(int d, const std::vector<double>& beta_list,
                                                   double theta,
                                                   const std::vector<std::size_t>& K_list,
                                                   double T = 1.0);

} // namespace lfbm
