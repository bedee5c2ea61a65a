#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lfbm {

/// Dense symmetric matrix, row-major n x n.
struct SymMatrix {
    std::size_t n = 0;
    std::vector<double> a; // n*n

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct CholeskyResult {
    bool ok = false;
    double jitter = 0.0;       // diagonal shift that was needed
    std::vector<double> lower; // row-major lower triangle, full n*n storage
};

/// Cholesky with escalating diagonal jitter. Tries jitter 0, then powers of 10
/// starting at 1e-16*max_diag up to jitter_cap*max_diag.
CholeskyResult cholesky_with_jitter(const SymMatrix& m, double jitter_cap_rel = 1e-12);

/// y = L z for row-major lower-triangular L (full storage).
void lower_tri_matvec(std::span<const double> L, std::size_t n, std::span<const double> z,
                      std::span<double> y);

/// Neumaier compensated sum; result independent of reasonable reorderings
/// at the 1e-12 level the reports require.
double compensated_sum(std::span<const double> x);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct MomentStats {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double skewness = 0.0;
    double kurtosis = 0.0;  // raw m4/m2^2 (3 for a Gaussian)
    double se_mean = 0.0;
    double se_variance = 0.0; // from the fourth central moment
    std::size_t n = 0;
};

MomentStats moments(std::span<const double> x);

/// Largest singular value by power iteration on A^T A. Deterministic start.
double operator_norm(std::span<const double> a, std::size_t rows, std::size_t cols,
                     int iters = 200);

} // namespace lfbm
