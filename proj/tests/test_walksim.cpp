#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "walkmax/errors.hpp"
#include "walkmax/inequality.hpp"
#include "walkmax/normalize.hpp"
#include "walkmax/stats.hpp"
#include "walkmax/walksim.hpp"

using namespace walkmax;
using jumps::JumpSpec;

TEST_CASE("no positive excursion means every sample is zero") {
    // increments are -1-a or 1-a <= -0.5 < 0 in every case
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::rademacher();
    cfg.a = 1.5;
    cfg.T = 4.0;
    cfg.trials = 5000;
    cfg.seed = 3;
    const auto batch = walksim::simulate_max_batch(cfg);
    for (double s : batch.samples) CHECK(s == 0.0);
    for (double r : batch.argmax_ratios) CHECK(r == 0.0);
}

TEST_CASE("exact enumeration of a short lattice walk") {
    const int K = 12;
    const double a = 0.3;
    const auto law = oracle::enumerate_rademacher_max(K, a);

    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::rademacher();
    cfg.a = a;
    cfg.trials = 40000;
    cfg.seed = 17;
    cfg.horizon_override = K;
    const auto batch = walksim::simulate_max_batch(cfg);
    stats::EmpiricalDistribution d(batch.samples);

    // DKW at 99.9% covers the sup over all points including the atoms; the
    // tiny offset absorbs last-ulp differences between the two summation
    // orders at atom boundaries
    const double band = stats::dkw_epsilon(cfg.trials, 0.001);
    for (std::size_t i = 0; i < law.values.size(); ++i) {
        const double f_hat = d.ecdf(law.values[i] + 1e-9);
        const double f = oracle::enumerated_cdf(law, law.values[i]);
        CHECK(std::fabs(f_hat - f) <= band);
    }
    // atom at zero separately, with a binomial error bar
    const double p0 = oracle::enumerated_cdf(law, 0.0);
    const double se = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(cfg.trials));
    CHECK(std::fabs(d.ecdf(1e-9) - p0) <= 4.0 * se);
}

TEST_CASE("pathwise monotone coupling in the drift") {
    walksim::WalkConfig lo;
    lo.spec = JumpSpec::exp_difference(1.0);
    lo.a = 0.2;
    lo.T = 5.0;
    lo.trials = 4000;
    lo.seed = 23;
    auto hi = lo;
    hi.a = 0.35;
    hi.horizon_override = walksim::simulate_max_batch(lo).horizon; // equal K
    lo.horizon_override = hi.horizon_override;
    const auto b_lo = walksim::simulate_max_batch(lo);
    const auto b_hi = walksim::simulate_max_batch(hi);
    REQUIRE(b_lo.samples.size() == b_hi.samples.size());
    for (std::size_t i = 0; i < b_lo.samples.size(); ++i)
        CHECK(b_hi.samples[i] <= b_lo.samples[i]);
}

TEST_CASE("queueing oracle fixed point") {
    const double sigma = walksim::gim1_sigma_star(1.0, 0.5);
    // root of sigma (2 - sigma) = exp(-0.5 (1 - sigma))
    CHECK(std::fabs(sigma * (2.0 - sigma) - std::exp(-0.5 * (1.0 - sigma))) < 1e-11);
    CHECK(sigma == doctest::Approx(0.552).epsilon(1e-3));
    // an independent bisection on the same scalar equation
    double lo = 1e-9, hi = 1.0 - 1e-9;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double g = mid * (2.0 - mid) - std::exp(-0.5 * (1.0 - mid));
        (g < 0.0 ? lo : hi) = mid;
    }
    CHECK(sigma == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));

    // overwhelming drift: the tail vanishes
    CHECK(walksim::exact_gim1_tail(1.0, 50.0, 1.0) < 1e-6);
    CHECK_THROWS_AS(walksim::gim1_sigma_star(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("queueing oracle against brute-force simulation") {
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::service_minus_shifted_arrival(1.0, 0.5);
    cfg.a = 0.0; // drift already inside the law
    cfg.horizon_override = 400;
    cfg.trials = 30000;
    cfg.seed = 29;
    const auto batch = walksim::simulate_max_batch(cfg);
    stats::EmpiricalDistribution d(batch.samples);
    const double band = stats::dkw_epsilon(cfg.trials, 0.01);
    const auto cdf = [](double x) {
        return x < 0.0 ? 0.0 : 1.0 - walksim::exact_gim1_tail(1.0, 0.5, x);
    };
    double worst = 0.0;
    for (double x : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0})
        worst = std::max(worst, std::fabs(d.ecdf(x) - cdf(x)));
    CHECK(worst <= band);
}

TEST_CASE("drift zero requires an explicit horizon") {
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::service_minus_shifted_arrival(1.0, 0.5);
    cfg.a = 0.0;
    cfg.trials = 10;
    CHECK_THROWS_AS(walksim::simulate_max_batch(cfg), std::invalid_argument);
}

TEST_CASE("truncation certificate shapes") {
    const struct {
        JumpSpec spec;
        double alpha;
    } cases[] = {
        {JumpSpec::exp_difference(1.0), 2.0},
        {JumpSpec::gaussian(1.0), 2.0},
        {JumpSpec::two_sided_pareto(1.5, 1.0), 1.5},
        {JumpSpec::one_sided_pareto_centered(1.5, 1.0), 1.5},
    };
    for (const auto& c : cases) {
        CAPTURE(c.spec.describe());
        walksim::WalkConfig cfg;
        cfg.spec = c.spec;
        cfg.a = 0.1;
        cfg.trials = 1;
        for (double T : {2.0, 8.0}) {
            cfg.T = T;
            const double b1 = walksim::truncation_certificate(cfg);
            cfg.T = 2.0 * T;
            const double b2 = walksim::truncation_certificate(cfg);
            CHECK(b1 > 0.0);
            CHECK(b2 / b1 <= std::pow(2.0, 1.0 - c.alpha) * 1.05);
        }
    }
    // finite-variance slope of log B against log T is -1
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::gaussian(1.0);
    cfg.a = 0.1;
    cfg.trials = 1;
    std::vector<std::pair<double, double>> pts;
    for (double T : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        cfg.T = T;
        pts.emplace_back(T, walksim::truncation_certificate(cfg));
    }
    CHECK(std::fabs(stats::loglog_slope(pts).slope + 1.0) <= 0.1);
}

TEST_CASE("late-window probe is monotone in the lower cut") {
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::two_sided_pareto(1.5, 1.0);
    cfg.a = 0.2;
    cfg.trials = 2000;
    cfg.seed = 31;
    const auto sweep = walksim::truncation_tail_sweep(cfg, {2.0, 4.0, 8.0}, 17.0);
    REQUIRE(sweep.size() == 3);
    // nested windows share paths, so the ordering is exact
    CHECK(sweep[1].estimate <= sweep[0].estimate);
    CHECK(sweep[2].estimate <= sweep[1].estimate);
    CHECK(sweep[0].estimate > 0.0);
    for (const auto& p : sweep) CHECK(p.stderr_ <= 0.012);
    CHECK_THROWS_AS(walksim::truncation_tail_probe(cfg, 8.0, 4.0),
                    std::invalid_argument);
}

TEST_CASE("probe estimates sit below the calibrated certificate") {
    const auto spec = JumpSpec::two_sided_pareto(1.5, 1.0);
    const auto sweep_rep = inequality::maximal_ratio_sweep_rel(
        spec, {100, 1000}, {0.5, 1.0, 2.0, 4.0}, 20000, 47);
    walksim::WalkConfig cfg;
    cfg.spec = spec;
    cfg.a = 0.2;
    cfg.trials = 2000;
    cfg.seed = 48;
    const auto probes = walksim::truncation_tail_sweep(cfg, {2.0, 4.0, 8.0}, 17.0);
    const std::vector<double> tlos = {2.0, 4.0, 8.0};
    for (std::size_t i = 0; i < probes.size(); ++i) {
        cfg.T = tlos[i];
        const double bound = sweep_rep.c_hat * walksim::truncation_certificate(cfg);
        CHECK(probes[i].estimate <= bound + 2.0 * probes[i].stderr_);
    }
}

TEST_CASE("argmax concentrates on the heavy-traffic time scale") {
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::exp_difference(1.0);
    cfg.a = 0.1;
    cfg.T = 20.0;
    cfg.trials = 20000;
    cfg.seed = 37;
    const auto batch = walksim::simulate_max_batch(cfg);
    std::size_t inside = 0;
    for (double r : batch.argmax_ratios)
        if (r <= 10.0) ++inside;
    CHECK(static_cast<double>(inside) / batch.argmax_ratios.size() >= 0.9);
}

TEST_CASE("results do not depend on the worker count") {
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::two_sided_pareto(1.5, 1.0);
    cfg.a = 0.3;
    cfg.T = 3.0;
    cfg.trials = 10000;
    cfg.seed = 41;
    cfg.workers = 1;
    const auto one = walksim::simulate_max_batch(cfg);
    cfg.workers = 4;
    const auto four = walksim::simulate_max_batch(cfg);
    REQUIRE(one.samples.size() == four.samples.size());
    for (std::size_t i = 0; i < one.samples.size(); ++i) {
        CHECK(one.samples[i] == four.samples[i]);
        CHECK(one.argmax_ratios[i] == four.argmax_ratios[i]);
    }
}

TEST_CASE("step budget refusal") {
    walksim::WalkConfig cfg;
    cfg.spec = JumpSpec::exp_difference(1.0);
    cfg.a = 0.01;
    cfg.T = 20.0;
    cfg.trials = 100000;
    cfg.max_steps = 1000;
    CHECK_THROWS_AS(walksim::simulate_max_batch(cfg), BudgetError);
    try {
        walksim::simulate_max_batch(cfg);
    } catch (const BudgetError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("reduce trials") != std::string::npos);
    }
}

TEST_CASE("effective truncated moment of the perturbed family") {
    const auto spec = JumpSpec::exp_difference(1.0);
    std::optional<walksim::PerturbationSpec> pert =
        walksim::PerturbationSpec::uniform(1.0);
    // full second moment: Var(X) + Var(Y) = 2 + 1/3
    CHECK(walksim::effective_truncated_second_moment(spec, pert, 1e6) ==
          doctest::Approx(2.0 + 1.0 / 3.0).epsilon(1e-9));
    // Monte Carlo cross-check at a finite cut
    Rng rng(43);
    const int n = 1000000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = jumps::sample(spec, rng) + pert->sample(rng);
        if (std::fabs(z) <= 2.0) acc += z * z;
    }
    const double mc = acc / n;
    CHECK(walksim::effective_truncated_second_moment(spec, pert, 2.0) ==
          doctest::Approx(mc).epsilon(0.01));

    // two-point mixture with a lattice base: hand-computable value
    std::optional<walksim::PerturbationSpec> rp =
        walksim::PerturbationSpec::rademacher(0.5);
    const double v = walksim::effective_truncated_second_moment(
        JumpSpec::rademacher(), rp, 1.0);
    CHECK(v == doctest::Approx(0.125).epsilon(1e-12)); // only +-0.5 fall inside

    // perturbed norming uses the effective V
    walksim::WalkConfig cfg;
    cfg.spec = spec;
    cfg.a = 0.1;
    cfg.perturbation = pert;
    const auto n_eff = walksim::effective_n_of_a(cfg);
    CHECK(std::fabs(static_cast<double>(n_eff) / (2.3333 / 0.01) - 1.0) < 0.02);
    const double c_eff = walksim::effective_c_scale(cfg);
    CHECK(c_eff == doctest::Approx(std::sqrt(2.3333 * static_cast<double>(n_eff)))
                       .epsilon(0.01));
}
