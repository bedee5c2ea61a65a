#include "lfbm/cylindrical.hpp"

#include <cmath>
#include <stdexcept>

#include "lfbm/quadrature.hpp"
#include "lfbm/rng.hpp"

namespace lfbm {

FiniteRankMap::FiniteRankMap(std::size_t dim_state, std::size_t dim_noise)
    : e_(dim_state), m_(dim_noise), a_(dim_state * dim_noise, 0.0) {
    if (e_ == 0 || m_ == 0) throw std::invalid_argument("FiniteRankMap: zero dimension");
}

FiniteRankMap::FiniteRankMap(std::size_t dim_state, std::size_t dim_noise,
                             std::vector<double> entries)
    : e_(dim_state), m_(dim_noise), a_(std::move(entries)) {
    if (e_ == 0 || m_ == 0) throw std::invalid_argument("FiniteRankMap: zero dimension");
    if (a_.size() != e_ * m_) throw std::invalid_argument("FiniteRankMap: entries size");
}

double FiniteRankMap::hs_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double FiniteRankMap::op_norm() const { return operator_norm(a_, e_, m_); }

FiniteRankMap FiniteRankMap::scaled(double c) const {
    FiniteRankMap r(e_, m_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = c * a_[i];
    return r;
}

FiniteRankMap FiniteRankMap::operator+(const FiniteRankMap& o) const {
    if (e_ != o.e_ || m_ != o.m_) throw std::invalid_argument("FiniteRankMap: dim mismatch");
    FiniteRankMap r(e_, m_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

FiniteRankMap FiniteRankMap::compose(const FiniteRankMap& o) const {
    if (m_ != o.e_) throw std::invalid_argument("FiniteRankMap::compose: dim mismatch");
    FiniteRankMap r(e_, o.m_);
    for (std::size_t i = 0; i < e_; ++i)
        for (std::size_t k = 0; k < m_; ++k) {
            const double v = at(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < o.m_; ++j) r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

FiniteRankMap FiniteRankMap::rank_one(const std::vector<double>& x, const std::vector<double>& h) {
    FiniteRankMap r(x.size(), h.size());
    for (std::size_t p = 0; p < x.size(); ++p)
        for (std::size_t q = 0; q < h.size(); ++q) r.at(p, q) = x[p] * h[q];
    return r;
}

OperatorPath::OperatorPath(TimeGrid grid, std::vector<FiniteRankMap> cells)
    : grid_(grid), cells_(std::move(cells)) {
    if (cells_.size() != grid_.n_cells())
        throw std::invalid_argument("OperatorPath: one map per cell required");
    for (const auto& c : cells_)
        if (c.dim_state() != cells_.front().dim_state() ||
            c.dim_noise() != cells_.front().dim_noise())
            throw std::invalid_argument("OperatorPath: all maps must share (m, e)");
}

StepFunction OperatorPath::entry_function(std::size_t p, std::size_t q) const {
    std::vector<double> v(cells_.size());
    for (std::size_t j = 0; j < cells_.size(); ++j) v[j] = cells_[j].at(p, q);
    return StepFunction(grid_, std::move(v));
}

OperatorPath OperatorPath::weighted_by_power(double alpha) const {
    std::vector<FiniteRankMap> out;
    out.reserve(cells_.size());
    for (std::size_t j = 0; j < cells_.size(); ++j) {
        const double lo = grid_.node(j);
        const double hi = grid_.node(j + 1);
        // cell average of t^alpha
        const double w = (std::pow(hi, alpha + 1.0) - std::pow(lo, alpha + 1.0)) /
                         ((alpha + 1.0) * grid_.dt());
        out.push_back(cells_[j].scaled(w));
    }
    return OperatorPath(grid_, std::move(out));
}

OperatorPath SmoothOperatorPath::discretize(const TimeGrid& grid) const {
    std::vector<FiniteRankMap> cells;
    cells.reserve(grid.n_cells());
    for (std::size_t j = 0; j < grid.n_cells(); ++j) cells.push_back(value(grid.midpoint(j)));
    return OperatorPath(grid, std::move(cells));
}

CylindricalEnsemble::CylindricalEnsemble(const TimeGrid& grid, const HurstOrder& beta,
                                         std::size_t dim_noise, std::size_t n_paths,
                                         std::uint64_t master_seed) {
    if (dim_noise == 0) throw std::invalid_argument("CylindricalEnsemble: dim_noise");
    coords_.reserve(dim_noise);
    for (std::size_t q = 0; q < dim_noise; ++q)
        coords_.push_back(sample_cholesky(grid, beta, CovKind::liouville, n_paths,
                                          derive_seed(master_seed, 0xC001, q)));
}

double representation_norm(const OperatorPath& phi, const HurstOrder& beta) {
    double acc = 0.0;
    for (std::size_t p = 0; p < phi.dim_state(); ++p)
        for (std::size_t q = 0; q < phi.dim_noise(); ++q) {
            const double v = isometry_norm(phi.entry_function(p, q), beta);
            acc += v * v;
        }
    return std::sqrt(acc);
}

VectorMcResult integrate_vector_mc(const OperatorPath& phi, const CylindricalEnsemble& ens) {
    if (!(phi.grid() == ens.grid()))
        throw std::invalid_argument("integrate_vector_mc: grid mismatch");
    if (phi.dim_noise() != ens.dim_noise())
        throw std::invalid_argument("integrate_vector_mc: noise dimension mismatch");
    const std::size_t e = phi.dim_state();
    const std::size_t m = phi.dim_noise();
    const std::size_t n = phi.grid().n_cells();
    const std::size_t R = ens.n_paths();

    VectorMcResult res;
    res.outcomes.assign(R, std::vector<double>(e, 0.0));
    std::vector<double> norm_sq(R, 0.0);
    for (std::size_t r = 0; r < R; ++r) {
        auto& out = res.outcomes[r];
        for (std::size_t q = 0; q < m; ++q) {
            auto p = ens.coordinate(q).path(r);
            double prev = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double dw = p[j] - prev;
                prev = p[j];
                for (std::size_t pp = 0; pp < e; ++pp) out[pp] += phi.cell(j).at(pp, q) * dw;
            }
        }
        double s = 0.0;
        for (double v : out) s += v * v;
        norm_sq[r] = s;
    }
    const MomentStats ms = moments(norm_sq);
    res.norm_sq.mean = ms.mean;
    res.norm_sq.variance = ms.variance;
    res.norm_sq.std_error = ms.se_mean; // SE of the mean of ||.||^2
    res.norm_sq.mean_std_error = ms.se_mean;
    res.norm_sq.n_paths = R;
    res.coordinate_means.assign(e, 0.0);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t pp = 0; pp < e; ++pp) res.coordinate_means[pp] += res.outcomes[r][pp];
    for (double& v : res.coordinate_means) v /= static_cast<double>(R);
    return res;
}

namespace {

void check_derivative(const SmoothOperatorPath& phi, double T) {
    const double h = 1e-5 * T;
    for (int i = 1; i <= 7; ++i) {
        const double t = T * static_cast<double>(i) / 8.0;
        const FiniteRankMap d = phi.derivative(t);
        const FiniteRankMap fd =
            (phi.value(t + h) + phi.value(t - h).scaled(-1.0)).scaled(1.0 / (2.0 * h));
        double scale = 1.0;
        for (double v : d.entries()) scale = std::max(scale, std::abs(v));
        for (std::size_t k = 0; k < d.entries().size(); ++k)
            if (std::abs(d.entries()[k] - fd.entries()[k]) > 1e-6 * scale)
                throw std::invalid_argument(
                    "suff_condition_bound: supplied derivative disagrees with finite "
                    "differences");
    }
}

} // namespace

SuffConditionResult suff_condition_bound(const SmoothOperatorPath& phi, const HurstOrder& beta,
                                         const TimeGrid& grid) {
    if (!(beta.beta() < 0.5))
        throw std::invalid_argument("suff_condition_bound: requires beta < 1/2");
    if (grid.t_start() != 0.0)
        throw std::invalid_argument("suff_condition_bound: grid must start at 0");
    const double T = grid.t_end();
    check_derivative(phi, T);

    const double b = beta.beta();
    const double cb = 1.0 / (std::sqrt(2.0 * b) * std::tgamma(0.5 + b));
    const double phi_T = phi.value(T * (1.0 - 1e-12)).hs_norm();
    const double integral = integrate_adaptive(
        [&](double t) { return std::pow(t, b) * phi.derivative(t).hs_norm(); }, 0.0, T,
        1e-12 * std::max(1.0, phi_T), 48);

    SuffConditionResult r;
    r.bound = cb * std::pow(T, b) * phi_T + cb * integral;
    r.actual = representation_norm(phi.discretize(grid), beta);
    return r;
}

DominationResult domination_check(const OperatorPath& phi, const HurstOrder& beta,
                                  double alpha) {
    DominationResult r;
    r.liouville_norm = representation_norm(phi, beta);
    r.brownian_norm = representation_norm(phi, HurstOrder(0.5));
    if (alpha >= 0.0) {
        if (!(beta.beta() > 0.5) || !(alpha < beta.beta() - 0.5))
            throw std::invalid_argument(
                "domination_check: weighted branch needs beta > 1/2 and 0 <= alpha < beta-1/2");
        r.weighted_liouville_norm = representation_norm(phi.weighted_by_power(alpha), beta);
        r.has_weighted = true;
    }
    return r;
}

} // namespace lfbm
