#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "walkmax/errors.hpp"
#include "walkmax/jumps.hpp"

using namespace walkmax;
using jumps::JumpSpec;

namespace {

// density-based reference for E(X^2; |X| <= x), independent of the library's
// closed forms
double v_oracle(const JumpSpec& spec, double x) {
    switch (spec.kind) {
        case jumps::JumpKind::Gaussian:
            return oracle::romberg(
                [&](double t) { return t * t * jumps::density(spec, t); }, -x, x);
        case jumps::JumpKind::ExpDifference:
            return oracle::romberg_split(
                [&](double t) { return t * t * jumps::density(spec, t); }, -x, 0.0, x);
        case jumps::JumpKind::TwoSidedPareto: {
            const double xm = spec.p2;
            if (x <= xm) return 0.0;
            return 2.0 * oracle::romberg(
                             [&](double t) { return t * t * jumps::density(spec, t); },
                             xm, x);
        }
        case jumps::JumpKind::OneSidedParetoCentered: {
            const double m = spec.p1 * spec.p2 / (spec.p1 - 1.0);
            const double lo = std::max(-x, spec.p2 - m);
            if (x <= lo) return 0.0;
            return oracle::romberg(
                [&](double t) { return t * t * jumps::density(spec, t); }, lo, x);
        }
        case jumps::JumpKind::ServiceMinusShiftedArrival:
            return oracle::romberg_split(
                [&](double t) { return t * t * jumps::density(spec, t); }, -x,
                -spec.p2, x);
        default:
            throw std::runtime_error("no oracle for this kind");
    }
}

double mean_deviation_in_se(const JumpSpec& spec, std::uint64_t n,
                            std::uint64_t seed) {
    Rng rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = jumps::sample(spec, rng);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(n));
    return std::fabs(mean - spec.mean()) / std::max(se, 1e-300);
}

} // namespace

TEST_CASE("catalog parameter validation") {
    CHECK_THROWS_AS(JumpSpec::gaussian(0.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpSpec::two_sided_pareto(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpSpec::two_sided_pareto(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpSpec::one_sided_pareto_centered(0.9, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpSpec::symmetric_stable(2.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JumpSpec::service_minus_shifted_arrival(1.0, -0.1),
                    std::invalid_argument);
    CHECK_NOTHROW(JumpSpec::symmetric_stable(2.0, 1.0));
}

TEST_CASE("rademacher sampling") {
    const auto spec = JumpSpec::rademacher();
    Rng rng(101);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = jumps::sample(spec, rng);
        CHECK((x == 1.0 || x == -1.0));
        sum += x;
    }
    CHECK(std::fabs(sum / n) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("stable alpha=2 matches a direct gaussian sampler in variance") {
    const auto spec = JumpSpec::symmetric_stable(2.0, 1.0);
    Rng rng(55);
    double s2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = jumps::sample(spec, rng);
        s2 += x * x;
    }
    oracle::RefRng ref(56);
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = std::sqrt(2.0) * ref.gaussian();
        r2 += z * z;
    }
    CHECK(s2 / n == doctest::Approx(2.0).epsilon(0.05));
    CHECK(s2 / n == doctest::Approx(r2 / n).epsilon(0.05));
}

TEST_CASE("two-sided pareto tail frequency") {
    const auto spec = JumpSpec::two_sided_pareto(1.5, 1.0);
    Rng rng(77);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i)
        if (std::fabs(jumps::sample(spec, rng)) > 4.0) ++hits;
    const double expect = std::pow(4.0, -1.5); // 0.125
    const double se = std::sqrt(expect * (1.0 - expect) / n);
    CHECK(std::fabs(static_cast<double>(hits) / n - expect) <= 3.0 * se);
}

TEST_CASE("centered specs have mean 0 within 4 empirical standard errors") {
    for (const auto& spec :
         {JumpSpec::gaussian(1.0), JumpSpec::exp_difference(1.0),
          JumpSpec::two_sided_pareto(1.5, 1.0),
          JumpSpec::one_sided_pareto_centered(1.5, 1.0), JumpSpec::rademacher(),
          JumpSpec::symmetric_stable(1.7, 1.0)}) {
        CAPTURE(spec.describe());
        CHECK(mean_deviation_in_se(spec, 1000000, 900) <= 4.0);
    }
    const auto oracle_spec = JumpSpec::service_minus_shifted_arrival(1.0, 0.5);
    CHECK(!oracle_spec.centered);
    CHECK(mean_deviation_in_se(oracle_spec, 1000000, 901) <= 4.0); // vs mean -0.5
}

TEST_CASE("closed-form V agrees with density quadrature to 1e-6 relative") {
    const struct {
        JumpSpec spec;
        std::vector<double> xs;
    } cases[] = {
        {JumpSpec::gaussian(1.0), {0.5, 1.0, 3.0}},
        {JumpSpec::gaussian(2.0), {1.0, 4.0}},
        {JumpSpec::exp_difference(1.0), {0.5, 2.0, 8.0}},
        {JumpSpec::exp_difference(2.5), {1.0, 3.0}},
        {JumpSpec::two_sided_pareto(1.5, 1.0), {2.0, 4.0, 32.0}},
        {JumpSpec::two_sided_pareto(1.2, 0.5), {1.0, 16.0}},
        {JumpSpec::one_sided_pareto_centered(1.5, 1.0), {1.0, 5.0, 50.0}},
        {JumpSpec::service_minus_shifted_arrival(1.0, 0.5), {0.5, 2.0, 6.0}},
    };
    for (const auto& c : cases) {
        for (double x : c.xs) {
            CAPTURE(c.spec.describe());
            CAPTURE(x);
            const double got = jumps::truncated_second_moment(c.spec, x);
            const double want = v_oracle(c.spec, x);
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("trivial truncated moments and tails") {
    const auto rad = JumpSpec::rademacher();
    CHECK(jumps::truncated_second_moment(rad, 0.5) == 0.0);
    CHECK(jumps::truncated_second_moment(rad, 2.0) == 1.0);
    CHECK(jumps::tail_probability(rad, 2.0) == 0.0);
    CHECK(jumps::truncated_mean_abs(rad, 2.0) == 0.0);

    const auto tsp = JumpSpec::two_sided_pareto(1.5, 1.0);
    // alpha (x^{2-alpha} - 1) / (2-alpha) at x = 4: 3 (sqrt(4) - 1) = 3
    CHECK(jumps::truncated_second_moment(tsp, 4.0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(jumps::tail_probability(tsp, 4.0) == doctest::Approx(0.125).epsilon(1e-12));

    const auto g = JumpSpec::gaussian(1.0);
    CHECK(jumps::tail_probability(g, 0.0) == 1.0);
    CHECK(jumps::truncated_mean_abs(g, 1.7) == 0.0);
}

TEST_CASE("one-sided pareto truncated mean against quadrature") {
    const auto spec = JumpSpec::one_sided_pareto_centered(1.5, 1.0);
    const double m = 3.0;
    for (double x : {1.0, 10.0, 100.0}) {
        const double lo = std::max(-x, 1.0 - m);
        const double want = std::fabs(oracle::romberg(
            [&](double t) { return t * jumps::density(spec, t); }, lo, x, 1e-13));
        CHECK(jumps::truncated_mean_abs(spec, x) == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("V is nondecreasing and bounded by the variance") {
    for (const auto& spec :
         {JumpSpec::gaussian(1.5), JumpSpec::exp_difference(0.7),
          JumpSpec::two_sided_pareto(1.5, 1.0), JumpSpec::rademacher()}) {
        CAPTURE(spec.describe());
        double prev = 0.0;
        for (double x = 0.25; x <= 4096.0; x *= 2.0) {
            const double v = jumps::truncated_second_moment(spec, x);
            CHECK(v >= prev - 1e-12);
            CHECK(v >= 0.0);
            if (std::isfinite(spec.variance())) CHECK(v <= spec.variance() + 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("regular variation index of V for the heavy-tailed law") {
    const auto tsp = JumpSpec::two_sided_pareto(1.5, 1.0);
    const double dlog = std::log(jumps::truncated_second_moment(tsp, 2000.0)) -
                        std::log(jumps::truncated_second_moment(tsp, 1000.0));
    CHECK(std::fabs(dlog - 0.5 * std::log(2.0)) <= 0.01);
}

TEST_CASE("one-step bound components stay within 1.5x of their anchor values") {
    // anchor at the first grid point with V > 0 and at the geometric midpoint;
    // ratio profiles of the catalog peak near one of the two
    for (const auto& spec :
         {JumpSpec::gaussian(1.0), JumpSpec::exp_difference(1.0),
          JumpSpec::two_sided_pareto(1.5, 1.0),
          JumpSpec::one_sided_pareto_centered(1.5, 1.0), JumpSpec::rademacher()}) {
        CAPTURE(spec.describe());
        const double xm = std::max(spec.support_radius_min(), 1.0);
        std::vector<double> tails, means;
        for (int j = 0; j <= 12; ++j) {
            const double x = std::ldexp(xm, j);
            const double v = jumps::truncated_second_moment(spec, x);
            if (v <= 0.0) continue; // no mass inside yet
            tails.push_back(jumps::tail_probability(spec, x) * x * x / v);
            means.push_back(jumps::truncated_mean_abs(spec, x) * x / v);
        }
        REQUIRE(!tails.empty());
        const double c_tail = std::max(tails.front(), tails[tails.size() / 2]);
        const double c_mean = std::max(means.front(), means[means.size() / 2]);
        for (double r : tails) CHECK(r <= 1.5 * c_tail + 1e-12);
        for (double r : means) CHECK(r <= 1.5 * c_mean + 1e-12);
    }
}

TEST_CASE("sampler determinism") {
    for (const auto& spec :
         {JumpSpec::gaussian(1.0), JumpSpec::two_sided_pareto(1.5, 1.0),
          JumpSpec::symmetric_stable(1.5, 1.0)}) {
        Rng a(31415, 2), b(31415, 2);
        for (int i = 0; i < 200; ++i)
            CHECK(jumps::sample(spec, a) == jumps::sample(spec, b));
    }
}

TEST_CASE("symmetric stable density and moments") {
    // alpha = 2 slice is the normal law with variance 2 scale^2
    for (double x : {0.0, 0.5, 2.0, 6.0}) {
        const double want = std::exp(-0.25 * x * x) / (2.0 * std::sqrt(M_PI));
        CHECK(jumps::detail::symmetric_stable_density(2.0, x) ==
              doctest::Approx(want).epsilon(1e-12));
    }
    for (double alpha : {1.3, 1.5, 1.9}) {
        CAPTURE(alpha);
        // method handover continuity
        for (double x : {2.9, 3.9, 4.1, 5.5, 12.0}) {
            const double f0 = jumps::detail::symmetric_stable_density(alpha, x * (1 - 1e-6));
            const double f1 = jumps::detail::symmetric_stable_density(alpha, x * (1 + 1e-6));
            CHECK(f0 == doctest::Approx(f1).epsilon(1e-5));
        }
        // P(|X| > x) x^alpha -> (2/pi) Gamma(alpha) sin(pi alpha/2)
        const auto spec = JumpSpec::symmetric_stable(alpha, 1.0);
        const double want =
            2.0 / M_PI * std::tgamma(alpha) * std::sin(0.5 * M_PI * alpha);
        const double got = jumps::tail_probability(spec, 50.0) * std::pow(50.0, alpha);
        CHECK(got == doctest::Approx(want).epsilon(0.03));
    }
    // quadrature V against a sampling estimate
    const auto spec = JumpSpec::symmetric_stable(1.5, 1.0);
    Rng rng(4242);
    const int n = 400000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = jumps::sample(spec, rng);
        if (std::fabs(x) <= 3.0) acc += x * x;
    }
    const double mc = acc / n;
    const double v = jumps::truncated_second_moment(spec, 3.0);
    CHECK(v == doctest::Approx(mc).epsilon(0.02));
}

TEST_CASE("config block round trip and rejection of unknown keys") {
    const auto spec = JumpSpec::two_sided_pareto(1.5, 1.0);
    const auto kv = spec.to_config_block();
    const auto back = JumpSpec::from_config_block(kv);
    CHECK(back.kind == spec.kind);
    CHECK(back.p1 == spec.p1);
    CHECK(back.p2 == spec.p2);

    auto bad = kv;
    bad["unexpected"] = "1";
    CHECK_THROWS_AS(JumpSpec::from_config_block(bad), ConfigError);

    auto contradiction =
        JumpSpec::service_minus_shifted_arrival(1.0, 0.5).to_config_block();
    contradiction["centered"] = "true";
    CHECK_THROWS_AS(JumpSpec::from_config_block(contradiction), ConfigError);
}
