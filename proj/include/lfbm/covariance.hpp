#pragma once

#include "lfbm/grid.hpp"
#include "lfbm/linalg.hpp"

namespace lfbm {

/// Hurst-type order of a Liouville fBm. beta = 1/2 is standard Brownian motion.
class HurstOrder {
public:
    explicit HurstOrder(double beta);
    double beta() const { return beta_; }
    bool is_brownian() const;
    bool below_half() const { return beta_ < 0.5 && !is_brownian(); }
    bool above_half() const { return beta_ > 0.5 && !is_brownian(); }

private:
    double beta_;
};

enum class CovKind { liouville, classical };
enum class ClassicalNorm { as_printed, conventional_half };

/// E W^b(s) W^b(t) = (1/Gamma(b+1/2)^2) int_0^{s^t} (s-u)^{b-1/2}(t-u)^{b-1/2} du.
/// Closed forms at s=t, s^t=0 and b=1/2; otherwise adaptive quadrature on the
/// substituted integrand (absolute tolerance 1e-10 or better).
double cov_liouville(double s, double t, const HurstOrder& beta);

/// Classical fBm covariance s^{2b} + t^{2b} - |t-s|^{2b}, or half that under
/// the conventional normalization.
double cov_classical(double s, double t, const HurstOrder& beta,
                     ClassicalNorm norm = ClassicalNorm::as_printed);

/// Covariance matrix over the grid nodes t_1..t_n (the process starts at 0).
SymMatrix covariance_matrix(const TimeGrid& grid, const HurstOrder& beta, CovKind kind,
                            ClassicalNorm norm = ClassicalNorm::as_printed);

} // namespace lfbm
