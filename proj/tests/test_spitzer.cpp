#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "walkmax/errors.hpp"
#include "walkmax/normalize.hpp"
#include "walkmax/spitzer.hpp"
#include "walkmax/walksim.hpp"

using namespace walkmax;
using jumps::JumpSpec;

namespace {

spitzer::SpitzerConfig base_config() {
    spitzer::SpitzerConfig cfg;
    cfg.spec = JumpSpec::exp_difference(1.0);
    cfg.a = 0.2;
    cfg.mu_grid = {0.5, 1.0, 2.0};
    cfg.eps = 0.1;
    cfg.T = 30.0;
    cfg.trials = 30000;
    cfg.seed = 1234;
    return cfg;
}

// exact series terms for the lattice walk via the binomial convolution,
// k small enough for direct summation
double exact_lattice_term(std::uint64_t k, double a, double c, double mu) {
    double acc = 0.0;
    const double lg_k = std::lgamma(static_cast<double>(k) + 1.0);
    for (std::uint64_t j = 0; j <= k; ++j) {
        const double s = 2.0 * static_cast<double>(j) - static_cast<double>(k);
        const double drifted = s - a * static_cast<double>(k);
        if (drifted <= 0.0) continue;
        const double logp = lg_k - std::lgamma(static_cast<double>(j) + 1.0) -
                            std::lgamma(static_cast<double>(k - j) + 1.0) -
                            static_cast<double>(k) * std::log(2.0);
        acc += std::exp(logp) * (1.0 - std::exp(-mu * drifted / c));
    }
    return acc / static_cast<double>(k);
}

} // namespace

TEST_CASE("mu = 0 collapses the series") {
    auto cfg = base_config();
    cfg.mu_grid = {0.0};
    cfg.trials = 2000;
    const auto res = spitzer::estimate_terms(cfg);
    for (double t : res.t_k[0]) CHECK(t == 0.0);
    CHECK(res.laplace[0] == 1.0);
    CHECK(res.sigma1[0] == 0.0);
    CHECK(res.sigma2[0] == 0.0);
}

TEST_CASE("terms are bounded by 1/k") {
    auto cfg = base_config();
    cfg.trials = 5000;
    const auto res = spitzer::estimate_terms(cfg);
    for (std::size_t m = 0; m < res.mu_grid.size(); ++m)
        for (std::uint64_t k = 1; k <= res.horizon; ++k) {
            CHECK(res.t_k[m][k - 1] >= 0.0);
            CHECK(res.t_k[m][k - 1] <= 1.0 / static_cast<double>(k) + 1e-15);
        }
}

TEST_CASE("series transform matches the queueing oracle") {
    const auto cfg = base_config();
    const auto res = spitzer::estimate_terms(cfg);
    const double sigma = walksim::gim1_sigma_star(1.0, cfg.a);
    const double rate = 1.0 * (1.0 - sigma);
    for (std::size_t m = 0; m < cfg.mu_grid.size(); ++m) {
        const double lambda = cfg.mu_grid[m] / res.c_na;
        const double exact =
            (1.0 - sigma) + sigma * rate / (rate + lambda); // atom plus tail
        CHECK(std::fabs(res.laplace[m] - exact) <=
              3.0 * res.laplace_se[m] + res.sigma3_bound);
    }
}

TEST_CASE("lattice terms against the exact convolution") {
    spitzer::SpitzerConfig cfg;
    cfg.spec = JumpSpec::rademacher();
    cfg.a = 0.2;
    cfg.mu_grid = {1.0};
    cfg.eps = 0.1;
    cfg.T = 30.0;
    cfg.trials = 30000;
    cfg.seed = 4321;
    const auto res = spitzer::estimate_terms(cfg);
    CHECK(res.n_a == 25);
    CHECK(res.c_na == doctest::Approx(5.0).epsilon(1e-6));
    for (std::uint64_t k = 1; k <= 64; ++k) {
        const double exact = exact_lattice_term(k, cfg.a, res.c_na, 1.0);
        CHECK(std::fabs(res.t_k[0][k - 1] - exact) <=
              5.0 * res.t_k_se[0][k - 1] + 1e-9);
    }
}

TEST_CASE("lower split scales like eps^(1/alpha) and linearly in mu") {
    spitzer::SpitzerConfig cfg;
    cfg.spec = JumpSpec::exp_difference(1.0);
    cfg.a = 0.05;
    cfg.mu_grid = {0.5, 1.0, 2.0};
    cfg.eps = 0.2;
    cfg.T = 1.5;
    cfg.trials = 150000;
    cfg.seed = 99;
    const auto res = spitzer::estimate_terms(cfg);
    const double target = std::pow(0.5, 0.5); // alpha = 2
    for (double eps : {0.2, 0.1, 0.05}) {
        const double r =
            spitzer::sigma1_at(res, 1, eps / 2.0) / spitzer::sigma1_at(res, 1, eps);
        CHECK(r <= target * 1.2);
        CHECK(r >= target / 1.2);
    }

    // second-order curvature of 1 - e^{-mu s} fades as eps shrinks
    double lo = 1e300, hi = 0.0;
    for (std::size_t m = 0; m < cfg.mu_grid.size(); ++m) {
        const double per_mu = spitzer::sigma1_at(res, m, 0.025) / cfg.mu_grid[m];
        lo = std::min(lo, per_mu);
        hi = std::max(hi, per_mu);
    }
    CHECK(hi / lo <= 1.1);
}

TEST_CASE("tail-sum skeleton halves by the regular-variation exponent") {
    const auto expdiff = JumpSpec::exp_difference(1.0);
    const auto tsp = JumpSpec::two_sided_pareto(1.5, 1.0);
    const auto n_e = normalize::n_of_a(expdiff, 0.1);
    const auto n_t = normalize::n_of_a(tsp, 0.1);
    for (double T : {4.0, 16.0}) {
        const double r_e = spitzer::sigma3_bound(expdiff, 0.1, n_e, 2.0 * T) /
                           spitzer::sigma3_bound(expdiff, 0.1, n_e, T);
        CHECK(r_e <= 0.5 * 1.05);
        const double r_t = spitzer::sigma3_bound(tsp, 0.1, n_t, 2.0 * T) /
                           spitzer::sigma3_bound(tsp, 0.1, n_t, T);
        CHECK(r_t <= std::pow(2.0, -0.5) * 1.05);
    }
}

TEST_CASE("partial exponentials decrease as terms accumulate") {
    auto cfg = base_config();
    cfg.trials = 5000;
    const auto res = spitzer::estimate_terms(cfg);
    double partial = 0.0, prev = 1.0;
    for (std::uint64_t k = 1; k <= res.horizon; ++k) {
        partial += res.t_k[1][k - 1];
        const double e = std::exp(-partial);
        CHECK(e <= prev + 1e-15);
        prev = e;
    }
    // transforms decrease in mu
    for (std::size_t m = 1; m < res.mu_grid.size(); ++m)
        CHECK(res.laplace[m] <=
              res.laplace[m - 1] + 2.0 * (res.laplace_se[m] + res.laplace_se[m - 1]));
    for (double l : res.laplace) {
        CHECK(l > 0.0);
        CHECK(l <= 1.0);
    }
}

TEST_CASE("positive-part means stay on the c_k scale") {
    const auto cfg = base_config();
    const auto res = spitzer::estimate_terms(cfg);
    const double at_n =
        res.pos_part[res.n_a - 1] /
        normalize::c_of_n(cfg.spec, static_cast<double>(res.n_a));
    for (std::uint64_t k = res.n_a / 4; k <= 4 * res.n_a; k += 3) {
        const double ck = normalize::c_of_n(cfg.spec, static_cast<double>(k));
        CHECK(res.pos_part[k - 1] / ck <= 2.0 * at_n);
    }
}

TEST_CASE("rescaled terms approach the limit integrand") {
    spitzer::SpitzerConfig cfg;
    cfg.spec = JumpSpec::exp_difference(1.0);
    cfg.mu_grid = {1.0};
    cfg.eps = 0.1;
    cfg.T = 2.5;
    cfg.trials = 40000;
    cfg.seed = 7;

    cfg.a = 0.2;
    const auto coarse = spitzer::integrand_limit_compare(cfg, {0.5, 1.0, 2.0}, 200000);
    cfg.a = 0.05;
    const auto fine = spitzer::integrand_limit_compare(cfg, {0.5, 1.0, 2.0}, 200000);

    // the alpha = 2 limit integrand has a one-dimensional quadrature oracle
    for (const auto& row : fine) {
        const double v = row.v, mu = row.mu;
        const double want =
            oracle::romberg(
                [&](double z) {
                    const double exc = std::sqrt(v) * z - v;
                    const double val = exc > 0.0 ? 1.0 - std::exp(-mu * exc) : 0.0;
                    return val * std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
                },
                std::sqrt(v), std::sqrt(v) + 12.0, 1e-12) /
            v;
        CHECK(std::fabs(row.limit_integrand - want) <= 4.0 * row.limit_se + 1e-4);
    }

    double worst_coarse = 0.0, worst_fine = 0.0, worst_joint = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        worst_coarse = std::max(worst_coarse, std::fabs(coarse[i].diff));
        worst_fine = std::max(worst_fine, std::fabs(fine[i].diff));
        worst_joint = std::max(worst_joint, coarse[i].joint_se + fine[i].joint_se);
    }
    CHECK(worst_fine <= 0.5 * worst_coarse + 2.0 * worst_joint);

    // mu = 0: both sides vanish identically
    cfg.mu_grid = {0.0};
    cfg.trials = 2000;
    const auto zero = spitzer::integrand_limit_compare(cfg, {1.0}, 2000);
    CHECK(zero[0].scaled_term == 0.0);
    CHECK(zero[0].limit_integrand == 0.0);
}

TEST_CASE("series side matches direct simulation") {
    // light-tailed case plus the lattice case; mu = 0 rows are exact
    spitzer::SpitzerConfig cfg;
    cfg.spec = JumpSpec::exp_difference(1.0);
    cfg.a = 0.2;
    cfg.mu_grid = {0.0, 0.5, 1.0, 2.0};
    cfg.eps = 0.1;
    cfg.T = 30.0;
    cfg.trials = 10000;
    cfg.seed = 2222;
    const auto wh = spitzer::wiener_hopf_consistency(cfg);
    CHECK(wh.rows[0].series_side == 1.0);
    CHECK(wh.rows[0].direct_side == 1.0);
    CHECK(wh.rows[0].diff == 0.0);
    CHECK(wh.pass);

    spitzer::SpitzerConfig lat = cfg;
    lat.spec = JumpSpec::rademacher();
    lat.a = 0.25;
    const auto whl = spitzer::wiener_hopf_consistency(lat);
    CHECK(whl.pass);
}

TEST_CASE("budget refusal and worker independence") {
    auto cfg = base_config();
    cfg.max_steps = 100;
    CHECK_THROWS_AS(spitzer::estimate_terms(cfg), BudgetError);

    cfg = base_config();
    cfg.trials = 4000;
    cfg.workers = 1;
    const auto one = spitzer::estimate_terms(cfg);
    cfg.workers = 3;
    const auto three = spitzer::estimate_terms(cfg);
    for (std::size_t m = 0; m < cfg.mu_grid.size(); ++m) {
        CHECK(one.laplace[m] == three.laplace[m]);
        for (std::uint64_t k = 1; k <= one.horizon; ++k)
            CHECK(one.t_k[m][k - 1] == three.t_k[m][k - 1]);
    }
}

TEST_CASE("configuration validation") {
    auto cfg = base_config();
    cfg.mu_grid.clear();
    CHECK_THROWS_AS(spitzer::estimate_terms(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.eps = 1.2;
    CHECK_THROWS_AS(spitzer::estimate_terms(cfg), std::invalid_argument);
    cfg = base_config();
    cfg.T = 0.5;
    CHECK_THROWS_AS(spitzer::estimate_terms(cfg), std::invalid_argument);
}
