#include "lfbm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfbm {
namespace {

bool cholesky_inplace(std::vector<double>& L, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = L[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) return false;
                L[i * n + i] = std::sqrt(s);
            } else {
                L[i * n + j] = s / L[j * n + j];
            }
        }
        for (std::size_t j = i + 1; j < n; ++j) L[i * n + j] = 0.0;
    }
    return true;
}

} // namespace

CholeskyResult cholesky_with_jitter(const SymMatrix& m, double jitter_cap_rel) {
    CholeskyResult res;
    const std::size_t n = m.n;
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m.at(i, i)));
    if (max_diag == 0.0) max_diag = 1.0;

    double jitter = 0.0;
    for (;;) {
        res.lower = m.a;
        if (jitter > 0.0)
            for (std::size_t i = 0; i < n; ++i) res.lower[i * n + i] += jitter;
        if (cholesky_inplace(res.lower, n)) {
            res.ok = true;
            res.jitter = jitter;
            return res;
        }
        if (jitter == 0.0)
            jitter = 1e-16 * max_diag;
        else
            jitter *= 10.0;
        if (jitter > jitter_cap_rel * max_diag) {
            res.ok = false;
            res.jitter = jitter;
            res.lower.clear();
            return res;
        }
    }
}

void lower_tri_matvec(std::span<const double> L, std::size_t n, std::span<const double> z,
                      std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = L.data() + i * n;
        for (std::size_t j = 0; j <= i; ++j) s += row[j] * z[j];
        y[i] = s;
    }
}

double compensated_sum(std::span<const double> x) {
    double sum = 0.0, comp = 0.0;
    for (double v : x) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

MomentStats moments(std::span<const double> x) {
    MomentStats s;
    s.n = x.size();
    if (s.n == 0) return s;
    s.mean = compensated_sum(x) / static_cast<double>(s.n);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(s.n);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.variance = (s.n > 1) ? m2 * n / (n - 1.0) : 0.0;
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.kurtosis = m4 / (m2 * m2);
    }
    if (s.n > 1) {
        s.se_mean = std::sqrt(s.variance / n);
        const double var_of_var = (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n;
        s.se_variance = var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
    }
    return s;
}

double operator_norm(std::span<const double> a, std::size_t rows, std::size_t cols, int iters) {
    if (rows == 0 || cols == 0) return 0.0;
    std::vector<double> v(cols), av(rows);
    for (std::size_t j = 0; j < cols; ++j) v[j] = 1.0 / std::sqrt(static_cast<double>(cols));
    double norm = 0.0;
    for (int it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += a[i * cols + j] * v[j];
            av[i] = s;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows; ++i) s += a[i * cols + j] * av[i];
            v[j] = s;
        }
        double vn = 0.0;
        for (double z : v) vn += z * z;
        vn = std::sqrt(vn);
        if (vn == 0.0) return 0.0;
        for (double& z : v) z /= vn;
        norm = std::sqrt(vn);
    }
    return norm;
}

} // namespace lfbm
