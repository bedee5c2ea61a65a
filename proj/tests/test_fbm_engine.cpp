#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lfbm/covariance.hpp"
#include "lfbm/rng.hpp"
#include "lfbm/sampling.hpp"
#include "lfbm/serialize.hpp"
#include "oracles.hpp"

using namespace lfbm;

TEST_CASE("HurstOrder validation and Brownian flag") {
    CHECK_THROWS(HurstOrder(0.0));
    CHECK_THROWS(HurstOrder(1.0));
    CHECK(HurstOrder(0.5).is_brownian());
    CHECK(HurstOrder(0.3).below_half());
    CHECK(HurstOrder(0.7).above_half());
}

TEST_CASE("cov_liouville reduces to min(s,t) at beta = 1/2") {
    HurstOrder b(0.5);
    for (auto [s, t] : {std::pair{0.25, 0.75}, {1.0, 1.0}, {0.1, 0.9}, {0.5, 0.125}})
        CHECK(cov_liouville(s, t, b) == doctest::Approx(std::min(s, t)).epsilon(1e-14));
}

TEST_CASE("cov_liouville closed form on the diagonal vs the quadrature oracle") {
    for (double beta : {0.1, 0.3, 0.75, 0.9}) {
        HurstOrder b(beta);
        for (double t : {0.25, 1.0}) {
            const double closed =
                std::pow(t, 2 * beta) / (2 * beta * std::pow(std::tgamma(beta + 0.5), 2));
            CHECK(cov_liouville(t, t, b) == doctest::Approx(closed).epsilon(1e-12));
            CHECK(oracles::gamma_cov(t, t, beta) == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("cov_liouville off-diagonal agrees with the independent oracle") {
    for (double beta : {0.15, 0.35, 0.6, 0.85}) {
        HurstOrder b(beta);
        for (auto [s, t] : {std::pair{0.2, 0.9}, {0.7, 0.71}, {0.05, 1.0}}) {
            const double orc = oracles::gamma_cov(s, t, beta);
            CHECK(cov_liouville(s, t, b) == doctest::Approx(orc).epsilon(1e-9));
        }
    }
}

TEST_CASE("cov_liouville vanishes when either time is zero and is symmetric") {
    HurstOrder b(0.35);
    CHECK(cov_liouville(0.0, 0.7, b) == 0.0);
    CHECK(cov_liouville(0.7, 0.0, b) == 0.0);
    CHECK(cov_liouville(0.3, 0.8, b) == doctest::Approx(cov_liouville(0.8, 0.3, b)));
    CHECK_THROWS(cov_liouville(-0.1, 0.5, b));
}

TEST_CASE("cov_classical printed form, conventional flag, and substitutions") {
    HurstOrder half(0.5);
    CHECK(cov_classical(1.0, 1.0, half) == doctest::Approx(2.0));
    CHECK(cov_classical(1.0, 1.0, half, ClassicalNorm::conventional_half) ==
          doctest::Approx(1.0));
    HurstOrder b(0.3);
    // substituting s = 0 into the printed formula gives 0 exactly (W(0) = 0)
    CHECK(cov_classical(0.0, 0.7, b) == doctest::Approx(0.0));
    CHECK(cov_classical(0.2, 0.9, b) == doctest::Approx(cov_classical(0.9, 0.2, b)));
}

TEST_CASE("cholesky sampler is deterministic and per-path seeded") {
    TimeGrid g(0.0, 1.0, 16);
    HurstOrder b(0.75);
    const auto e1 = sample_cholesky(g, b, CovKind::liouville, 8, 99);
    const auto e2 = sample_cholesky(g, b, CovKind::liouville, 8, 99);
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t i = 0; i < 16; ++i) CHECK(e1.path(r)[i] == e2.path(r)[i]);
    // path r depends only on (seed, r): a smaller batch shares its paths
    const auto e3 = sample_cholesky(g, b, CovKind::liouville, 3, 99);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t i = 0; i < 16; ++i) CHECK(e1.path(r)[i] == e3.path(r)[i]);
}

TEST_CASE("brownian reduction: sample covariance of both samplers matches min(s,t)") {
    TimeGrid g(0.0, 1.0, 16);
    HurstOrder b(0.5);
    const std::size_t N = 6000;
    for (int scheme = 0; scheme < 2; ++scheme) {
        const PathEnsemble ens = scheme == 0
                                     ? sample_cholesky(g, b, CovKind::liouville, N, 4242)
                                     : sample_moving_average(g, b, N, 4242);
        for (auto [i, j] : {std::pair<std::size_t, std::size_t>{3, 11}, {7, 7}, {0, 15}}) {
            std::vector<double> prod(N);
            for (std::size_t r = 0; r < N; ++r) prod[r] = ens.path(r)[i] * ens.path(r)[j];
            const MomentStats ms = moments(prod);
            const double oracle = std::min(g.node(i + 1), g.node(j + 1));
            CHECK(std::abs(ms.mean - oracle) <= 4.0 * ms.se_mean);
        }
    }
}

TEST_CASE("liouville variance at t=1 for beta=0.75 within 3 standard errors") {
    TimeGrid g(0.0, 1.0, 32);
    HurstOrder b(0.75);
    const std::size_t N = 8000;
    const auto ens = sample_cholesky(g, b, CovKind::liouville, N, 7);
    std::vector<double> sq(N);
    for (std::size_t r = 0; r < N; ++r) sq[r] = ens.path(r)[31] * ens.path(r)[31];
    const MomentStats ms = moments(sq);
    CHECK(std::abs(ms.mean - cov_liouville(1.0, 1.0, b)) <= 3.0 * ms.se_mean);
}

TEST_CASE("moving average at beta=1/2 is the plain random walk") {
    TimeGrid g(0.0, 1.0, 20);
    const auto a = moving_average_coefficients(g, HurstOrder(0.5));
    const double sdt = std::sqrt(g.dt());
    for (std::size_t i = 0; i < 20; ++i)
        for (std::size_t j = 0; j <= i; ++j)
            CHECK(a[i * 20 + j] == doctest::Approx(sdt).epsilon(1e-13));
}

TEST_CASE("moving average diagonal variance is exact for every beta by construction") {
    TimeGrid g(0.0, 1.0, 24);
    for (double beta : {0.1, 0.35, 0.6, 0.9}) {
        HurstOrder b(beta);
        const auto a = moving_average_coefficients(g, b);
        for (std::size_t i = 0; i < 24; i += 7) {
            double var = 0.0;
            for (std::size_t j = 0; j <= i; ++j) var += a[i * 24 + j] * a[i * 24 + j];
            const double ti = g.node(i + 1);
            CHECK(var == doctest::Approx(cov_liouville(ti, ti, b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("moving average off-diagonal covariance error decreases with measured order") {
    for (double beta : {0.25, 0.75}) {
        HurstOrder b(beta);
        std::vector<double> errs;
        for (std::size_t n : {32, 64, 128}) {
            TimeGrid g(0.0, 1.0, n);
            const auto a = moving_average_coefficients(g, b);
            double worst = 0.0;
            for (auto [fi, fj] : {std::pair{0.25, 0.75}, {0.5, 1.0}}) {
                const std::size_t i = static_cast<std::size_t>(fi * n) - 1;
                const std::size_t j = static_cast<std::size_t>(fj * n) - 1;
                double cov = 0.0;
                for (std::size_t k = 0; k <= std::min(i, j); ++k)
                    cov += a[i * n + k] * a[j * n + k];
                worst = std::max(
                    worst, std::abs(cov - cov_liouville(g.node(i + 1), g.node(j + 1), b)));
            }
            errs.push_back(worst);
        }
        CHECK(errs[1] < errs[0]);
        CHECK(errs[2] < errs[1]);
        const double order = std::log2(errs[0] / errs[2]) / 2.0;
        CHECK(order >= std::min(2.0 * beta, 1.0) - 0.15);
    }
}

TEST_CASE("marginals are Gaussian within moment bands") {
    TimeGrid g(0.0, 1.0, 8);
    const std::size_t N = 8000;
    const auto ens = sample_cholesky(g, HurstOrder(0.3), CovKind::liouville, N, 11);
    std::vector<double> col(N);
    for (std::size_t i : {std::size_t{3}, std::size_t{7}}) {
        for (std::size_t r = 0; r < N; ++r) col[r] = ens.path(r)[i];
        const MomentStats ms = moments(col);
        CHECK(std::abs(ms.skewness) <= 4.0 * std::sqrt(6.0 / N));
        CHECK(std::abs(ms.kurtosis - 3.0) <= 4.0 * std::sqrt(24.0 / N));
    }
}

TEST_CASE("covariance matrices pass Cholesky with tiny jitter across beta and n") {
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        TimeGrid g(0.0, 1.0, 256);
        const SymMatrix cov = covariance_matrix(g, HurstOrder(beta), CovKind::liouville);
        const CholeskyResult ch = cholesky_with_jitter(cov);
        CHECK(ch.ok);
        double maxd = 0.0;
        for (std::size_t i = 0; i < cov.n; ++i) maxd = std::max(maxd, cov.at(i, i));
        CHECK(ch.jitter <= 1e-12 * maxd);
    }
    // one larger instance
    TimeGrid g(0.0, 1.0, 1024);
    const SymMatrix cov = covariance_matrix(g, HurstOrder(0.9), CovKind::liouville);
    CHECK(cholesky_with_jitter(cov).ok);
}

TEST_CASE("increments are non-stationary away from the diagonal unless beta = 1/2") {
    auto incr_var = [&](double s, double t, const HurstOrder& b) {
        return cov_liouville(t, t, b) - 2.0 * cov_liouville(s, t, b) + cov_liouville(s, s, b);
    };
    for (double beta : {0.25, 0.75}) {
        HurstOrder b(beta);
        // near-diagonal constant c from a small increment at t0 = 1/2
        const double h0 = std::pow(2.0, -10);
        const double c = incr_var(0.5, 0.5 + h0, b) / std::pow(h0, 2.0 * beta);
        const double wide = incr_var(0.1, 0.9, b);
        const double stationary_pred = c * std::pow(0.8, 2.0 * beta);
        CHECK(std::abs(wide / stationary_pred - 1.0) > 0.05);
    }
    HurstOrder half(0.5);
    const double wide = incr_var(0.1, 0.9, half);
    CHECK(wide == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("near-diagonal increment exponent regression gives 2 beta within 0.1") {
    for (double beta : {0.25, 0.5, 0.75}) {
        HurstOrder b(beta);
        std::vector<double> lx, ly;
        const double t0 = 0.5;
        for (int k = -10; k <= -4; ++k) {
            const double h = std::pow(2.0, k);
            const double v = cov_liouville(t0 + h, t0 + h, b) -
                             2.0 * cov_liouville(t0, t0 + h, b) + cov_liouville(t0, t0, b);
            lx.push_back(std::log(h));
            ly.push_back(std::log(v));
        }
        const double slope = fit_line(lx, ly).slope;
        CHECK(std::abs(slope - 2.0 * beta) <= 0.1);
    }
}

TEST_CASE("classical-kind sampling matches the printed covariance") {
    TimeGrid g(0.0, 1.0, 8);
    HurstOrder b(0.3);
    const std::size_t N = 6000;
    const auto ens = sample_cholesky(g, b, CovKind::classical, N, 21);
    std::vector<double> prod(N);
    for (std::size_t r = 0; r < N; ++r) prod[r] = ens.path(r)[3] * ens.path(r)[7];
    const MomentStats ms = moments(prod);
    const double oracle = cov_classical(g.node(4), g.node(8), b);
    CHECK(std::abs(ms.mean - oracle) <= 4.0 * ms.se_mean);
}

TEST_CASE("ensemble serialization carries seed, scheme and moments") {
    TimeGrid g(0.0, 0.5, 4);
    const auto ens = sample_moving_average(g, HurstOrder(0.4), 50, 1234);
    const std::string js = ensemble_summary_json(ens, {{"beta", "0.4"}});
    const auto j = nlohmann::json::parse(js);
    CHECK(j.at("seed").get<std::uint64_t>() == 1234);
    CHECK(j.at("scheme").get<std::string>() == "moving_average");
    CHECK(j.at("node_mean").size() == 4);
    CHECK(j.at("config").at("beta").get<std::string>() == "0.4");

    std::ostringstream os;
    write_ensemble_csv(os, ens, {{"beta", "0.4"}});
    CHECK(os.str().find("path_id,t,value\n") != std::string::npos);
    CHECK(os.str().find("# beta=0.4\n") != std::string::npos);
}

TEST_CASE("ensembles start at t=0 and reject zero paths") {
    TimeGrid g(0.5, 1.0, 4);
    CHECK_THROWS(sample_moving_average(g, HurstOrder(0.4), 10, 1));
    TimeGrid g0(0.0, 1.0, 4);
    CHECK_THROWS(PathEnsemble(g0, 0, 1, SampleScheme::cholesky, HurstOrder(0.4),
                              CovKind::liouville));
}
