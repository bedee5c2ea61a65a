#pragma once

#include <cstdint>
#include <vector>

#include "lfbm/covariance.hpp"
#include "lfbm/grid.hpp"
#include "lfbm/sampling.hpp"

namespace lfbm {

/// Which deterministic transform carries the Ito isometry at this order.
enum class IntegrandRegime { below_half, brownian, above_half };

IntegrandRegime regime_of(const HurstOrder& beta);

/// Monte Carlo estimate of a statistic; std_error refers to the variance
/// estimate (fourth-moment based), which is what the isometry checks compare
/// against.
struct McEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;      // SE of `variance`
    double mean_std_error = 0.0; // SE of `mean`
    std::size_t n_paths = 0;
};

/// Deterministic value of (E |int_0^T f dW^beta|^2)^{1/2} for a step function:
/// the L2 norm of the regime transform g of f. For beta != 1/2 the transform
/// of a step function is the explicit one-sided power sum
///   g(s) = sum_k d_k (t_k - s)_+^{beta-1/2} / Gamma(beta+1/2),
/// integrated cell by cell with a power substitution at each singular node,
/// so the value is exact to quadrature tolerance. At beta = 1/2 this is the
/// plain L2 norm.
double isometry_norm(const StepFunction& f, const HurstOrder& beta);

/// Pathwise stochastic integral sum_j f_j (W(t_j) - W(t_{j-1})) against each
/// path of the ensemble; the returned variance is the Monte Carlo counterpart
/// of isometry_norm^2.
McEstimate integrate_mc(const StepFunction& f, const HurstOrder& beta,
                        const PathEnsemble& ensemble);

/// Pathwise integral values, one per path (exposed for linearity tests).
std::vector<double> integrate_paths(const StepFunction& f, const PathEnsemble& ensemble);

/// (E |int_s^t (t-r)^{-alpha} dW^beta(r)|^2)^{1/2} via the regime transform of
/// the cell-averaged integrand on (0, t-s), three grid levels and Richardson
/// extrapolation with measured order. Equals c_{alpha,beta} (t-s)^{beta-alpha}.
/// Requires 0 <= alpha < min(beta+1/2, 1) and 0 <= s < t.
double kernel_variance(double s, double t, double alpha, const HurstOrder& beta);

/// c_{alpha,beta} extracted at interval length `len`.
double kernel_variance_constant(double alpha, const HurstOrder& beta, double len);

struct RatioBracket {
    double beta = 0.0;
    std::size_t f_samples = 0;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
};

/// For each beta < 1/2: ratio of the classical-fBm variance quadratic form to
/// isometry_norm^2 over seeded random step functions on `grid`. Sample i of a
/// run is a deterministic function of (seed, i), so enlarging f_samples
/// extends rather than reshuffles the sample.
std::vector<RatioBracket> norm_equivalence_report(const std::vector<double>& betas,
                                                  std::size_t f_samples, std::uint64_t seed,
                                                  const TimeGrid& grid);

/// Classical-fBm variance quadratic form of a step function (increment form
/// of the printed covariance).
double classical_variance_form(const StepFunction& f, const HurstOrder& beta,
                               ClassicalNorm norm = ClassicalNorm::as_printed);

} // namespace lfbm
