#include "lfbm/spde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lfbm/frac_kernel.hpp"
#include "lfbm/isometry.hpp"
#include "lfbm/linalg.hpp"
#include "lfbm/quadrature.hpp"
#include "lfbm/rng.hpp"

namespace lfbm {

std::vector<double> dirichlet_eigenvalues(int d, std::size_t K) {
    if (d != 1 && d != 2) throw std::invalid_argument("dirichlet_eigenvalues: d must be 1 or 2");
    if (K == 0) throw std::invalid_argument("dirichlet_eigenvalues: K must be positive");
    std::vector<double> lam;
    if (d == 1) {
        lam.reserve(K);
        for (std::size_t k = 1; k <= K; ++k)
            lam.push_back(static_cast<double>(k) * static_cast<double>(k) * M_PI * M_PI);
        return lam;
    }
    // enough per-axis range to cover the first K sorted pairs
    const std::size_t axis = static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * K))) + 2;
    for (std::size_t k1 = 1; k1 <= axis; ++k1)
        for (std::size_t k2 = 1; k2 <= axis; ++k2)
            lam.push_back(static_cast<double>(k1 * k1 + k2 * k2) * M_PI * M_PI);
    std::sort(lam.begin(), lam.end());
    lam.resize(K);
    return lam;
}

std::vector<double> GalerkinModel::eigenvalues() const { return dirichlet_eigenvalues(d, K); }

std::vector<double> GalerkinModel::noise_coeffs() const {
    std::vector<double> b = eigenvalues();
    for (double& v : b) v = noise_rho == 0.0 ? 1.0 : std::pow(v, -noise_rho);
    return b;
}

namespace {

constexpr double kWindow = 64.0; // e-foldings of the exponential kept on the grid

// Cell averages of e^{-(tau - v)} on (0, tau) with n cells: exact closed form.
std::vector<double> exp_cell_averages(double tau, std::size_t n) {
    std::vector<double> avg(n);
    const double dt = tau / static_cast<double>(n);
    double prev = std::exp(-tau);
    for (std::size_t j = 0; j < n; ++j) {
        const double cur = std::exp(-(tau - static_cast<double>(j + 1) * dt));
        avg[j] = (cur - prev) / dt;
        prev = cur;
    }
    return avg;
}

// Squared transform norm of v -> e^{-(tau - v)} on (0, tau), n cells.
double exp_transform_norm_sq(const HurstOrder& beta, double tau, std::size_t n) {
    TimeGrid grid(0.0, tau, n);
    StepFunction f(grid, exp_cell_averages(tau, n));
    switch (regime_of(beta)) {
    case IntegrandRegime::brownian: {
        const double v = f.l2_norm();
        return v * v;
    }
    case IntegrandRegime::below_half: {
        FracKernelMatrix k(grid, 0.5 - beta.beta(), Side::right);
        const double v = k.solve(f.values()).l2_norm();
        return v * v;
    }
    case IntegrandRegime::above_half: {
        FracKernelMatrix k(grid, beta.beta() - 0.5, Side::right, EvalPoint::midpoint);
        const double v = StepFunction(grid, k.apply(f)).l2_norm();
        return v * v;
    }
    }
    return 0.0;
}

double richardson3(double v1, double v2, double v4) {
    const double d1 = v1 - v2;
    const double d2 = v2 - v4;
    if (d2 == 0.0 || !std::isfinite(d1 / d2)) return v4;
    const double r = d1 / d2;
    if (!(r > 1.0) || std::abs(r - 1.0) < 1e-9) return v4;
    return v4 + (v4 - v2) / (r - 1.0);
}

// The transform of the exponential has the far-field expansion
//   g(y) = m0 y^{s-1}/Gamma(s) (1 + (1-s) mu1/y + (1-s)(2-s) mu2/(2 y^2) + ...)
// with y the distance from the right endpoint, s = beta - 1/2 and mu_k = k!
// the moments of the unit exponential. Integrating g^2 from the window edge
// to tau gives the variance mass the finite grid cannot see.
double transform_tail_sq(const HurstOrder& beta, double tau, double window) {
    if (tau <= window || beta.is_brownian()) return 0.0;
    const double s = beta.beta() - 0.5;
    const double g = std::tgamma(s);
    const double c = 1.0 / (g * g);
    auto integrand = [&](double y) {
        const double corr = 1.0 + (1.0 - s) / y + (1.0 - s) * (2.0 - s) / (y * y);
        return c * std::pow(y, 2.0 * s - 2.0) * corr * corr;
    };
    return integrate_adaptive(integrand, window, tau, 1e-15, 48);
}

} // namespace

double mode_variance(double lambda, double t, const HurstOrder& beta) {
    if (!(lambda > 0.0)) throw std::invalid_argument("mode_variance: lambda must be positive");
    if (t < 0.0) throw std::invalid_argument("mode_variance: negative time");
    if (t == 0.0) return 0.0;
    if (beta.is_brownian()) return (1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda);
    const double tau = lambda * t;
    const double taug = std::min(tau, kWindow);
    const double v1 = exp_transform_norm_sq(beta, taug, 1024);
    const double v2 = exp_transform_norm_sq(beta, taug, 2048);
    const double v4 = exp_transform_norm_sq(beta, taug, 4096);
    const double near = richardson3(v1, v2, v4);
    const double tail = transform_tail_sq(beta, tau, taug);
    return std::pow(lambda, -2.0 * beta.beta()) * (near + tail);
}

MildSolutionPath::MildSolutionPath(TimeGrid grid, std::size_t n_modes)
    : grid_(grid), K_(n_modes), n_(grid.n_cells()), x_(n_modes * grid.n_cells(), 0.0) {}

double MildSolutionPath::e_theta_norm_sq(std::size_t node, double theta,
                                         const std::vector<double>& eigenvalues) const {
    double s = 0.0;
    for (std::size_t k = 0; k < K_; ++k) {
        const double w = theta == 0.0 ? 1.0 : std::pow(eigenvalues[k], 2.0 * theta);
        const double v = mode(k)[node];
        s += w * v * v;
    }
    return s;
}

namespace {

// Transform rows g^{(i)} for one mode on the refined noise grid: row i holds
// the regime transform of the cell-averaged e^{-lambda(t_i - s)} on (0, t_i),
// evaluated on noise cells 0..R*(i+1)-1. Rows are built incrementally:
// multiplying the integrand by e^{-lambda dt} and appending R fresh cells maps
// g^{(i)} -> e^{-lambda dt} g^{(i)} + (kernel action of the fresh cells).
class ModeTransform {
public:
    ModeTransform(double lambda, const TimeGrid& grid, const HurstOrder& beta, std::size_t R)
        : lambda_(lambda), grid_(grid), beta_(beta), R_(R), n_(grid.n_cells()), N_(R * n_),
          dtn_(grid.dt() / static_cast<double>(R)), rows_(n_ * N_, 0.0) {
        build();
    }

    std::span<const double> row(std::size_t i) const { return {rows_.data() + i * N_, N_}; }
    std::size_t row_len(std::size_t i) const { return R_ * (i + 1); }
    double dt_noise() const { return dtn_; }
    std::size_t n_noise_cells() const { return N_; }

private:
    void build() {
        switch (regime_of(beta_)) {
        case IntegrandRegime::brownian:
            build_brownian();
            return;
        case IntegrandRegime::above_half:
            build_above();
            return;
        case IntegrandRegime::below_half:
            build_below();
            return;
        }
    }

    // fresh-cell averages of e^{-lambda(t_i - s)} over the last R noise cells:
    // integral of the exponential over the cell divided by the cell width
    std::vector<double> fresh_averages(std::size_t i) const {
        std::vector<double> a(R_);
        const double ti = grid_.node(i + 1);
        double prev = std::exp(-lambda_ * grid_.dt()); // at s = t_i - dt
        for (std::size_t r = 0; r < R_; ++r) {
            const double s_hi = ti - grid_.dt() + static_cast<double>(r + 1) * dtn_;
            const double cur = std::exp(-lambda_ * (ti - s_hi));
            a[r] = (cur - prev) / (lambda_ * dtn_);
            prev = cur;
        }
        return a;
    }

    void build_brownian() {
        const double decay = std::exp(-lambda_ * grid_.dt());
        for (std::size_t i = 0; i < n_; ++i) {
            double* cur = rows_.data() + i * N_;
            if (i > 0) {
                const double* prev = rows_.data() + (i - 1) * N_;
                const std::size_t len = row_len(i - 1);
                for (std::size_t j = 0; j < len; ++j) cur[j] = decay * prev[j];
            }
            const std::vector<double> fresh = fresh_averages(i);
            for (std::size_t r = 0; r < R_; ++r) cur[R_ * i + r] = fresh[r];
        }
    }

    void build_above() {
        const double a = beta_.beta() - 0.5;
        // node-evaluated right-kernel coefficients on the noise grid
        std::vector<double> co(N_);
        const double g = std::tgamma(a + 1.0);
        const double da = std::pow(dtn_, a);
        double prevp = 0.0;
        for (std::size_t d = 0; d < N_; ++d) {
            const double curp = std::pow(static_cast<double>(d + 1), a);
            co[d] = da * (curp - prevp) / g;
            prevp = curp;
        }
        const double decay = std::exp(-lambda_ * grid_.dt());
        for (std::size_t i = 0; i < n_; ++i) {
            double* cur = rows_.data() + i * N_;
            if (i > 0) {
                const double* prev = rows_.data() + (i - 1) * N_;
                const std::size_t len = row_len(i - 1);
                for (std::size_t j = 0; j < len; ++j) cur[j] = decay * prev[j];
            }
            const std::vector<double> fresh = fresh_averages(i);
            const std::size_t base = R_ * i; // first fresh cell index
            const std::size_t len = row_len(i);
            for (std::size_t J = 0; J < len; ++J) {
                double s = 0.0;
                for (std::size_t r = 0; r < R_; ++r) {
                    const std::size_t j = base + r;
                    if (j < J) continue;
                    s += co[j - J] * fresh[r];
                }
                cur[J] += s;
            }
        }
    }

    void build_below() {
        // full re-solve per node; only used at unit-test scale
        const double a = 0.5 - beta_.beta();
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t len = row_len(i);
            TimeGrid sub(0.0, grid_.node(i + 1), len);
            std::vector<double> data(len);
            const double ti = grid_.node(i + 1);
            for (std::size_t J = 0; J < len; ++J)
                data[J] = std::exp(-lambda_ * (ti - sub.node(J)));
            FracKernelMatrix k(sub, a, Side::right);
            const StepFunction sol = k.solve(data);
            double* cur = rows_.data() + i * N_;
            for (std::size_t J = 0; J < len; ++J) cur[J] = sol.value(J);
        }
    }

    double lambda_;
    TimeGrid grid_;
    HurstOrder beta_;
    std::size_t R_;
    std::size_t n_;
    std::size_t N_;
    double dtn_;
    std::vector<double> rows_;
};

} // namespace

void simulate_mild_stream(const GalerkinModel& model, const TimeGrid& grid,
                          const HurstOrder& beta, std::size_t n_paths,
                          std::uint64_t master_seed, const ModePathObserver& observer,
                          const SimulateOptions& opts, SimulateDiagnostics* diag) {
    if (grid.t_start() != 0.0)
        throw std::invalid_argument("simulate_mild: grid must start at 0");
    if (opts.noise_refine == 0) throw std::invalid_argument("simulate_mild: noise_refine");
    const std::vector<double> lam = model.eigenvalues();
    const std::vector<double> bk = model.noise_coeffs();
    const std::size_t n = grid.n_cells();
    const std::size_t R = opts.noise_refine;
    const std::size_t N = R * n;
    // transform rows hold n * N doubles per mode
    if (static_cast<unsigned long long>(n) * N > 200000000ULL)
        throw std::runtime_error("simulate_mild: transform-row memory guard exceeded");

    const double dtn = grid.dt() / static_cast<double>(R);
    if (diag) {
        diag->max_lambda_dt_noise = lam.back() * dtn;
        diag->under_resolved = lam.back() * dtn > 10.0;
    }

    std::vector<double> xi(N);
    std::vector<double> X(n);
    const double sq_dtn = std::sqrt(dtn);
    for (std::size_t k = 0; k < model.K; ++k) {
        const ModeTransform tr(lam[k], grid, beta, R);
        for (std::size_t r = 0; r < n_paths; ++r) {
            GaussianStream gs(derive_seed(master_seed, k, r));
            for (std::size_t J = 0; J < N; ++J) xi[J] = gs.next();
            for (std::size_t i = 0; i < n; ++i) {
                const double* g = tr.row(i).data();
                const std::size_t len = tr.row_len(i);
                double s = 0.0;
                for (std::size_t J = 0; J < len; ++J) s += g[J] * xi[J];
                X[i] = bk[k] * sq_dtn * s;
            }
            observer(k, r, X);
        }
    }
}

std::vector<double> discrete_mode_variances(double lambda, const TimeGrid& grid,
                                            const HurstOrder& beta, std::size_t noise_refine) {
    const ModeTransform tr(lambda, grid, beta, noise_refine);
    const std::size_t n = grid.n_cells();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* g = tr.row(i).data();
        const std::size_t len = tr.row_len(i);
        double s = 0.0;
        for (std::size_t J = 0; J < len; ++J) s += g[J] * g[J];
        out[i] = tr.dt_noise() * s;
    }
    return out;
}

std::vector<MildSolutionPath> simulate_mild(const GalerkinModel& model, const TimeGrid& grid,
                                            const HurstOrder& beta, std::size_t n_paths,
                                            std::uint64_t master_seed,
                                            const SimulateOptions& opts,
                                            SimulateDiagnostics* diag) {
    const std::size_t total = model.K * grid.n_cells() * n_paths;
    if (total > 300000000ULL)
        throw std::runtime_error("simulate_mild: materialization memory guard exceeded");
    std::vector<MildSolutionPath> paths(n_paths, MildSolutionPath(grid, model.K));
    simulate_mild_stream(
        model, grid, beta, n_paths, master_seed,
        [&](std::size_t k, std::size_t r, std::span<const double> X) {
            auto dst = paths[r].mode(k);
            std::copy(X.begin(), X.end(), dst.begin());
        },
        opts, diag);
    return paths;
}

ModeStatsAccumulator::ModeStatsAccumulator(const GalerkinModel& model, const TimeGrid& grid,
                                           std::size_t max_lag)
    : model_(model), grid_(grid), max_lag_(max_lag), n_(grid.n_cells()),
      sf_sum_(model.K * max_lag, 0.0), sf_sum2_(model.K * max_lag, 0.0),
      node_sum_(model.K * n_, 0.0), node_sum2_(model.K * n_, 0.0), count_(model.K, 0) {
    if (max_lag_ == 0 || max_lag_ >= n_)
        throw std::invalid_argument("ModeStatsAccumulator: bad max_lag");
}

void ModeStatsAccumulator::operator()(std::size_t k, std::size_t, std::span<const double> X) {
    // window: t_i in [T/4, T-h]
    for (std::size_t m = 1; m <= max_lag_; ++m) {
        const std::size_t i0 = std::max<std::size_t>(1, n_ / 4);
        const std::size_t i1 = n_ - m; // exclusive
        double acc = 0.0;
        for (std::size_t i = i0; i < i1; ++i) {
            const double dd = X[i + m - 1] - X[i - 1];
            acc += dd * dd;
        }
        acc /= static_cast<double>(i1 - i0);
        sf_sum_[k * max_lag_ + (m - 1)] += acc;
        sf_sum2_[k * max_lag_ + (m - 1)] += acc * acc;
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const double v = X[i] * X[i];
        node_sum_[k * n_ + i] += v;
        node_sum2_[k * n_ + i] += v * v;
    }
    count_[k] += 1;
}

std::size_t ModeStatsAccumulator::n_paths_seen() const { return count_.empty() ? 0 : count_[0]; }

double ModeStatsAccumulator::sf_mean(std::size_t k, std::size_t lag) const {
    return sf_sum_[k * max_lag_ + (lag - 1)] / static_cast<double>(count_[k]);
}

double ModeStatsAccumulator::sf_var(std::size_t k, std::size_t lag) const {
    const double n = static_cast<double>(count_[k]);
    const double m = sf_mean(k, lag);
    const double m2 = sf_sum2_[k * max_lag_ + (lag - 1)] / n;
    return n > 1 ? std::max(0.0, (m2 - m * m) * n / (n - 1.0)) : 0.0;
}

double ModeStatsAccumulator::node_sq_mean(std::size_t k, std::size_t node) const {
    return node_sum_[k * n_ + node] / static_cast<double>(count_[k]);
}

double ModeStatsAccumulator::node_sq_var(std::size_t k, std::size_t node) const {
    const double n = static_cast<double>(count_[k]);
    const double m = node_sq_mean(k, node);
    const double m2 = node_sum2_[k * n_ + node] / n;
    return n > 1 ? std::max(0.0, (m2 - m * m) * n / (n - 1.0)) : 0.0;
}

namespace {

RegularityEstimate estimate_from_sf(
    const GalerkinModel& model, const TimeGrid& grid, std::size_t max_lag,
    const std::function<double(std::size_t, std::size_t)>& sf_mean,
    const std::function<double(std::size_t, std::size_t)>& sf_var, std::size_t n_paths,
    double theta) {
    const std::vector<double> lam = model.eigenvalues();
    const std::vector<double> bk = model.noise_coeffs();
    const double T = grid.length();

    // h in [2^-9, 2^-4]*T intersected with the grid lags
    std::vector<std::size_t> lags;
    for (std::size_t m = 1; m <= max_lag; ++m) {
        const double h = static_cast<double>(m) * grid.dt();
        if (h >= T / 512.0 * (1.0 - 1e-12) && h <= T / 16.0 * (1.0 + 1e-12)) lags.push_back(m);
    }
    if (lags.size() < 2)
        throw std::invalid_argument("regularity_estimate: degenerate h-range (need >= 2 lags)");

    RegularityEstimate res;

    // theta-series convergence gate: tail exponent of the measured modal
    // structure levels lambda^{2 theta} b^2 SF_k against sorted mode index,
    // fitted over the top half of the modes.
    {
        std::vector<double> lx, ly;
        for (std::size_t k = model.K / 2; k < model.K; ++k) {
            lx.push_back(std::log(static_cast<double>(k + 1)));
            ly.push_back(std::log(std::max(1e-300, std::pow(lam[k], 2.0 * theta) * bk[k] * bk[k] *
                                                        sf_mean(k, lags.back()))));
        }
        if (lx.size() >= 2) {
            res.tail_exponent = fit_line(lx, ly).slope;
            if (res.tail_exponent >= -1.0) {
                res.status = RegularityStatus::threshold_violation;
                return res;
            }
        }
    }

    std::vector<double> hs, S, Sse, lx, ly;
    for (std::size_t m : lags) {
        double s = 0.0, var = 0.0;
        for (std::size_t k = 0; k < model.K; ++k) {
            const double w = std::pow(lam[k], 2.0 * theta) * bk[k] * bk[k];
            s += w * sf_mean(k, m);
            var += w * w * sf_var(k, m) / static_cast<double>(n_paths);
        }
        hs.push_back(static_cast<double>(m) * grid.dt());
        S.push_back(s);
        Sse.push_back(std::sqrt(var));
        lx.push_back(std::log(hs.back()));
        ly.push_back(std::log(s));
    }
    res.lags = hs;
    res.structure = S;
    res.structure_se = Sse;
    res.holder_exponent = 0.5 * fit_line(lx, ly).slope;
    return res;
}

} // namespace

RegularityEstimate regularity_estimate(const ModeStatsAccumulator& stats, double theta) {
    // noise coefficients are already inside X_k; pass unit weights
    GalerkinModel m = stats.model();
    m.noise_rho = 0.0;
    return estimate_from_sf(
        m, stats.grid(), stats.max_lag(),
        [&](std::size_t k, std::size_t lag) { return stats.sf_mean(k, lag); },
        [&](std::size_t k, std::size_t lag) { return stats.sf_var(k, lag); },
        stats.n_paths_seen(), theta);
}

RegularityEstimate regularity_estimate(const std::vector<MildSolutionPath>& paths,
                                       const GalerkinModel& model, double theta) {
    if (paths.empty()) throw std::invalid_argument("regularity_estimate: no paths");
    const TimeGrid& grid = paths.front().grid();
    // lags up to h = T/16, the top of the regression window
    const std::size_t max_lag =
        std::min(grid.n_cells() - 1, std::max<std::size_t>(2, grid.n_cells() / 16));
    ModeStatsAccumulator acc(model, grid, max_lag);
    for (std::size_t r = 0; r < paths.size(); ++r)
        for (std::size_t k = 0; k < model.K; ++k) acc(k, r, paths[r].mode(k));
    return regularity_estimate(acc, theta);
}

std::vector<ThresholdRow> existence_threshold_scan(int d, const std::vector<double>& beta_list,
                                                   double theta,
                                                   const std::vector<std::size_t>& K_list,
                                                   double T) {
    if (K_list.empty()) throw std::invalid_argument("existence_threshold_scan: empty K list");
    const std::size_t Kmax = *std::max_element(K_list.begin(), K_list.end());
    const std::vector<double> lam = dirichlet_eigenvalues(d, Kmax);
    std::vector<ThresholdRow> rows;
    for (double b : beta_list) {
        HurstOrder beta(b);
        ThresholdRow row;
        row.beta = b;
        std::vector<double> terms(Kmax);
        for (std::size_t k = 0; k < Kmax; ++k)
            terms[k] = std::pow(lam[k], 2.0 * theta) * mode_variance(lam[k], T, beta);
        for (std::size_t K : K_list) {
            double s = 0.0;
            for (std::size_t k = 0; k < K; ++k) s += terms[k];
            row.partial_sums.push_back(s);
        }
        // tail fits over the top half of the modes
        std::vector<double> lx1, lx2, ly;
        for (std::size_t k = Kmax / 2; k < Kmax; ++k) {
            lx1.push_back(std::log(static_cast<double>(k + 1)));
            lx2.push_back(std::log(std::sqrt(lam[k]) / M_PI));
            ly.push_back(std::log(std::max(terms[k], 1e-300)));
        }
        row.tail_exponent_sorted = fit_line(lx1, ly).slope;
        row.tail_exponent_radial = fit_line(lx2, ly).slope;
        row.convergent = row.tail_exponent_sorted < -1.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lfbm
