#pragma once

#include <cstddef>
#include <vector>

#include "lfbm/grid.hpp"

namespace lfbm {

enum class Side { left, right };

/// Where the fractional-integral image is evaluated. Node evaluation is the
/// contract surface (right endpoints for the left integral, left endpoints
/// for the right integral); midpoint evaluation is used internally where the
/// extra half-order of accuracy matters.
enum class EvalPoint { node, midpoint };

/// Triangular discretization of the Riemann-Liouville integral I^alpha,
/// exact on step functions. On a uniform grid the matrix is Toeplitz, so only
/// the first row/column of coefficients is stored; at(i,j) exposes the full
/// triangular array.
///
/// Left side, node evaluation: (K f)_i = (I^alpha_{a+} f)(t_{i+1}) and
/// K[i][j] = [(t_{i+1}-t_j)^alpha - (t_{i+1}-t_{j+1})^alpha]/Gamma(alpha+1)
/// for j <= i (0-based rows/cells). The right side is the reflection of the
/// left matrix and evaluates at left endpoints t_i.
class FracKernelMatrix {
public:
    FracKernelMatrix(TimeGrid grid, double alpha, Side side,
                     EvalPoint eval = EvalPoint::node);

    const TimeGrid& grid() const { return grid_; }
    double alpha() const { return alpha_; }
    Side side() const { return side_; }
    EvalPoint eval() const { return eval_; }

    /// Entry of the triangular array; zero outside the triangle.
    double at(std::size_t i, std::size_t j) const;
    double diagonal() const { return coefs_[0]; }
    const std::vector<double>& coefficients() const { return coefs_; }

    /// Triangular matrix-vector product; exact node (or midpoint) values of
    /// I^alpha f for a step function f on the same grid.
    std::vector<double> apply(const StepFunction& f) const;

    /// Solve K f = g: the discrete fractional derivative D^alpha = (I^alpha)^{-1}.
    /// Requires node evaluation. Throws when the diagonal falls below
    /// 1e-14 * dt^alpha (ill-conditioned system).
    StepFunction solve(const std::vector<double>& g) const;

private:
    TimeGrid grid_;
    double alpha_;
    Side side_;
    EvalPoint eval_;
    std::vector<double> coefs_; // Toeplitz coefficients by lag
};

FracKernelMatrix build_kernel(const TimeGrid& grid, double alpha, Side side,
                              EvalPoint eval = EvalPoint::node);

/// Discrete H^alpha norm of a step function.
///   alpha > 0 : ||D^alpha f||_L2 (triangular solve against the exact kernel)
///   alpha = 0 : plain L2 norm
///   alpha < 0 : ||I^{-alpha} f||_L2 of the node image
/// Valid for alpha in (-1,0) u {0} u (0,1).
double h_norm(const StepFunction& f, double alpha, Side side);

} // namespace lfbm
