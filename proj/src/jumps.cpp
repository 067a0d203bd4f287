#include "walkmax/jumps.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "walkmax/errors.hpp"
#include "walkmax/quadrature.hpp"

namespace walkmax::jumps {

namespace {

constexpr double kPi = 3.14159265358979323846;

double require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be positive");
    return v;
}

double require_alpha_open(double a) {
    if (!(a > 1.0 && a < 2.0))
        throw std::invalid_argument("alpha must lie in (1,2)");
    return a;
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

// Laplace(beta) cumulative moments M_j(t) = E(X^j; X <= t).
double laplace_m0(double beta, double t) {
    return t < 0.0 ? 0.5 * std::exp(beta * t) : 1.0 - 0.5 * std::exp(-beta * t);
}
double laplace_m1(double beta, double t) {
    const double bt = beta * t;
    if (t < 0.0) return -std::exp(bt) * (1.0 - bt) / (2.0 * beta);
    return -std::exp(-bt) * (1.0 + bt) / (2.0 * beta);
}
double laplace_m2(double beta, double t) {
    const double bt = beta * t;
    const double b2 = beta * beta;
    if (t < 0.0) return std::exp(bt) * (bt * bt - 2.0 * bt + 2.0) / (2.0 * b2);
    return 2.0 / b2 - std::exp(-bt) * (bt * bt + 2.0 * bt + 2.0) / (2.0 * b2);
}

// One-sided Pareto(alpha, xm) antiderivatives of u^j times the density of P,
// expressed around u = t + m with m = E[P].
struct OneSidedParams {
    double alpha, xm, m;
};
OneSidedParams one_sided_params(const JumpSpec& s) {
    return {s.p1, s.p2, s.p1 * s.p2 / (s.p1 - 1.0)};
}

} // namespace

JumpSpec JumpSpec::gaussian(double sigma) {
    JumpSpec s;
    s.kind = JumpKind::Gaussian;
    s.p1 = require_positive(sigma, "sigma");
    s.centered = true;
    return s;
}

JumpSpec JumpSpec::exp_difference(double beta) {
    JumpSpec s;
    s.kind = JumpKind::ExpDifference;
    s.p1 = require_positive(beta, "beta");
    s.centered = true;
    return s;
}

JumpSpec JumpSpec::two_sided_pareto(double alpha, double xmin) {
    JumpSpec s;
    s.kind = JumpKind::TwoSidedPareto;
    s.p1 = require_alpha_open(alpha);
    s.p2 = require_positive(xmin, "xmin");
    s.centered = true;
    return s;
}

JumpSpec JumpSpec::one_sided_pareto_centered(double alpha, double xmin) {
    JumpSpec s;
    s.kind = JumpKind::OneSidedParetoCentered;
    s.p1 = require_alpha_open(alpha);
    s.p2 = require_positive(xmin, "xmin");
    s.centered = true;
    return s;
}

JumpSpec JumpSpec::rademacher() {
    JumpSpec s;
    s.kind = JumpKind::Rademacher;
    s.centered = true;
    return s;
}

JumpSpec JumpSpec::symmetric_stable(double alpha, double scale) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw std::invalid_argument("alpha must lie in (1,2]");
    JumpSpec s;
    s.kind = JumpKind::SymmetricStable;
    s.p1 = alpha;
    s.p2 = require_positive(scale, "scale");
    s.centered = true;
    return s;
}

JumpSpec JumpSpec::service_minus_shifted_arrival(double beta, double shift) {
    if (shift < 0.0) throw std::invalid_argument("shift must be >= 0");
    JumpSpec s;
    s.kind = JumpKind::ServiceMinusShiftedArrival;
    s.p1 = require_positive(beta, "beta");
    s.p2 = shift;
    s.centered = false;
    return s;
}

double JumpSpec::alpha() const {
    switch (kind) {
        case JumpKind::TwoSidedPareto:
        case JumpKind::OneSidedParetoCentered:
            return p1;
        case JumpKind::SymmetricStable:
            return p1;
        default:
            return 2.0;
    }
}

double JumpSpec::variance() const {
    switch (kind) {
        case JumpKind::Gaussian:
            return p1 * p1;
        case JumpKind::ExpDifference:
        case JumpKind::ServiceMinusShiftedArrival:
            return 2.0 / (p1 * p1);
        case JumpKind::Rademacher:
            return 1.0;
        case JumpKind::SymmetricStable:
            return p1 == 2.0 ? 2.0 * p2 * p2
                             : std::numeric_limits<double>::infinity();
        default:
            return std::numeric_limits<double>::infinity();
    }
}

double JumpSpec::mean() const {
    return kind == JumpKind::ServiceMinusShiftedArrival ? -p2 : 0.0;
}

double JumpSpec::support_radius_min() const {
    switch (kind) {
        case JumpKind::Rademacher:
            return 1.0;
        case JumpKind::TwoSidedPareto:
            return p2;
        default:
            return 0.0;
    }
}

std::string JumpSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case JumpKind::Gaussian:
            os << "gaussian(sigma=" << p1 << ")";
            break;
        case JumpKind::ExpDifference:
            os << "exp_difference(beta=" << p1 << ")";
            break;
        case JumpKind::TwoSidedPareto:
            os << "two_sided_pareto(alpha=" << p1 << ",xmin=" << p2 << ")";
            break;
        case JumpKind::OneSidedParetoCentered:
            os << "one_sided_pareto_centered(alpha=" << p1 << ",xmin=" << p2 << ")";
            break;
        case JumpKind::Rademacher:
            os << "rademacher";
            break;
        case JumpKind::SymmetricStable:
            os << "symmetric_stable(alpha=" << p1 << ",scale=" << p2 << ")";
            break;
        case JumpKind::ServiceMinusShiftedArrival:
            os << "service_minus_shifted_arrival(beta=" << p1 << ",shift=" << p2 << ")";
            break;
    }
    return os.str();
}

double sample(const JumpSpec& spec, Rng& rng) {
    switch (spec.kind) {
        case JumpKind::Gaussian:
            return spec.p1 * rng.gaussian();
        case JumpKind::ExpDifference: {
            const double u = rng.uniform01();
            return u < 0.5 ? std::log(2.0 * u) / spec.p1
                           : -std::log(2.0 * (1.0 - u)) / spec.p1;
        }
        case JumpKind::TwoSidedPareto: {
            const double u = rng.uniform01();
            if (u < 0.5) return -spec.p2 * std::pow(2.0 * u, -1.0 / spec.p1);
            return spec.p2 * std::pow(2.0 * (1.0 - u), -1.0 / spec.p1);
        }
        case JumpKind::OneSidedParetoCentered: {
            const auto pp = one_sided_params(spec);
            return pp.xm * std::pow(rng.uniform01(), -1.0 / pp.alpha) - pp.m;
        }
        case JumpKind::Rademacher:
            return rng.uniform01() < 0.5 ? -1.0 : 1.0;
        case JumpKind::SymmetricStable: {
            const double a = spec.p1;
            const double theta = kPi * (rng.uniform01() - 0.5);
            const double w = rng.exponential(1.0);
            // Polar transform for the symmetric case; exact in law.
            const double x = std::sin(a * theta) /
                             std::pow(std::cos(theta), 1.0 / a) *
                             std::pow(std::cos((1.0 - a) * theta) / w,
                                      (1.0 - a) / a);
            return spec.p2 * x;
        }
        case JumpKind::ServiceMinusShiftedArrival: {
            const double u = rng.uniform01();
            const double lap = u < 0.5 ? std::log(2.0 * u) / spec.p1
                                       : -std::log(2.0 * (1.0 - u)) / spec.p1;
            return lap - spec.p2;
        }
    }
    throw std::logic_error("unreachable jump kind");
}

// ---------------------------------------------------------------------------
// Symmetric stable density, scale 1, characteristic exponent -|t|^alpha.
// Convergent power series near the origin, asymptotic tail series far out,
// and a direct Fourier-cosine quadrature where neither reaches tolerance.
// ---------------------------------------------------------------------------
namespace detail {

namespace {

bool stable_taylor(double alpha, double x, double& out) {
    const double lx = x > 0.0 ? std::log(x) : 0.0;
    double sum = 0.0, maxterm = 0.0;
    for (int k = 0; k < 600; ++k) {
        const double lt = std::lgamma((2.0 * k + 1.0) / alpha) -
                          std::lgamma(2.0 * k + 1.0) + 2.0 * k * lx;
        const double term = std::exp(lt);
        maxterm = std::max(maxterm, term);
        sum += (k % 2 == 0) ? term : -term;
        if (k > 3 && term < 1e-18 * std::fabs(sum)) {
            if (maxterm * 1e-16 > 1e-12 * std::fabs(sum)) return false;
            out = sum / (kPi * alpha);
            return true;
        }
        if (x == 0.0) {
            out = std::exp(std::lgamma(1.0 / alpha)) / (kPi * alpha);
            return true;
        }
    }
    return false;
}

bool stable_asymptotic(double alpha, double x, double& out) {
    if (x < 3.0) return false;
    const double lx = std::log(x);
    double sum = 0.0, prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 170; ++k) {
        const double mag = std::exp(std::lgamma(k * alpha + 1.0) -
                                    std::lgamma(k + 1.0) -
                                    (k * alpha + 1.0) * lx);
        const double term = mag * std::sin(0.5 * k * kPi * alpha) *
                            ((k % 2 == 1) ? 1.0 : -1.0);
        if (mag > prev) {
            // divergence onset; truncation error is the size of the last term
            return prev < 1e-13 * std::fabs(sum) + 1e-18 ? (out = sum / kPi, true)
                                                         : false;
        }
        sum += term;
        prev = mag;
        if (mag < 1e-16 * std::fabs(sum) + 1e-22) {
            out = sum / kPi;
            return true;
        }
    }
    return false;
}

double stable_fourier(double alpha, double x) {
    const double tmax = std::pow(38.0, 1.0 / alpha);
    const auto f = [&](double t) { return std::cos(t * x) * std::exp(-std::pow(t, alpha)); };
    return quad::integrate(f, 0.0, tmax, 1e-13, "stable density fourier") / kPi;
}

} // namespace

double symmetric_stable_density(double alpha, double x) {
    x = std::fabs(x);
    if (alpha == 2.0) return std::exp(-0.25 * x * x) / (2.0 * std::sqrt(kPi));
    double v = 0.0;
    if (x >= 4.0 && stable_asymptotic(alpha, x, v)) return v;
    if (stable_taylor(alpha, x, v)) return v;
    if (stable_asymptotic(alpha, x, v)) return v;
    return stable_fourier(alpha, x);
}

namespace {

// P(|X| > x) for the standard symmetric stable law, alpha < 2.
double stable_std_tail(double alpha, double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 4.0) {
        const double lx = std::log(x);
        double sum = 0.0, prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 170; ++k) {
            const double mag = std::exp(std::lgamma(k * alpha + 1.0) -
                                        std::lgamma(k + 1.0) - k * alpha * lx) /
                               (k * alpha);
            if (mag > prev) break;
            sum += mag * std::sin(0.5 * k * kPi * alpha) * ((k % 2 == 1) ? 1.0 : -1.0);
            prev = mag;
            if (mag < 1e-16 * std::fabs(sum) + 1e-22)
                return 2.0 * sum / kPi;
        }
        if (prev < 1e-13 * std::fabs(sum) + 1e-18) return 2.0 * sum / kPi;
    }
    const auto f = [&](double t) { return symmetric_stable_density(alpha, t); };
    return std::max(0.0, 1.0 - 2.0 * quad::integrate(f, 0.0, x, 1e-11, "stable tail"));
}

} // namespace

} // namespace detail

double density(const JumpSpec& spec, double x) {
    switch (spec.kind) {
        case JumpKind::Gaussian:
            return std_normal_pdf(x / spec.p1) / spec.p1;
        case JumpKind::ExpDifference:
            return 0.5 * spec.p1 * std::exp(-spec.p1 * std::fabs(x));
        case JumpKind::TwoSidedPareto: {
            const double ax = std::fabs(x);
            if (ax < spec.p2) return 0.0;
            return 0.5 * spec.p1 * std::pow(spec.p2, spec.p1) *
                   std::pow(ax, -spec.p1 - 1.0);
        }
        case JumpKind::OneSidedParetoCentered: {
            const auto pp = one_sided_params(spec);
            const double u = x + pp.m;
            if (u < pp.xm) return 0.0;
            return pp.alpha * std::pow(pp.xm, pp.alpha) * std::pow(u, -pp.alpha - 1.0);
        }
        case JumpKind::Rademacher:
            throw std::invalid_argument("rademacher has no Lebesgue density");
        case JumpKind::SymmetricStable:
            return detail::symmetric_stable_density(spec.p1, x / spec.p2) / spec.p2;
        case JumpKind::ServiceMinusShiftedArrival:
            return 0.5 * spec.p1 * std::exp(-spec.p1 * std::fabs(x + spec.p2));
    }
    throw std::logic_error("unreachable jump kind");
}

namespace {

// ---- per-kind partial moments over (a, b], a <= b finite ----

PartialMoments gaussian_pm(double sigma, double a, double b) {
    const double za = a / sigma, zb = b / sigma;
    PartialMoments r;
    r.m0 = std_normal_cdf(zb) - std_normal_cdf(za);
    r.m1 = sigma * (std_normal_pdf(za) - std_normal_pdf(zb));
    r.m2 = sigma * sigma *
           ((std_normal_cdf(zb) - zb * std_normal_pdf(zb)) -
            (std_normal_cdf(za) - za * std_normal_pdf(za)));
    return r;
}

PartialMoments laplace_pm(double beta, double a, double b) {
    PartialMoments r;
    r.m0 = laplace_m0(beta, b) - laplace_m0(beta, a);
    r.m1 = laplace_m1(beta, b) - laplace_m1(beta, a);
    r.m2 = laplace_m2(beta, b) - laplace_m2(beta, a);
    return r;
}

// Positive-branch antiderivatives of t^j * density for the two-sided Pareto.
PartialMoments two_sided_pareto_pm(double alpha, double xm, double a, double b) {
    const auto seg = [&](double lo, double hi, int sign) {
        // integral of t^j f over [lo,hi] with lo>=xm, mapped from the
        // negative side when sign=-1
        PartialMoments r;
        if (!(hi > lo)) return r;
        const double c = 0.5 * alpha * std::pow(xm, alpha);
        const double a0 = c / alpha, a1 = c / (alpha - 1.0), a2 = c / (2.0 - alpha);
        r.m0 = a0 * (std::pow(lo, -alpha) - std::pow(hi, -alpha));
        const double m1 = a1 * (std::pow(lo, 1.0 - alpha) - std::pow(hi, 1.0 - alpha));
        const double m2 = a2 * (std::pow(hi, 2.0 - alpha) - std::pow(lo, 2.0 - alpha));
        r.m1 = sign * m1;
        r.m2 = m2;
        return r;
    };
    PartialMoments total;
    // positive support piece
    {
        const double lo = std::max(a, xm), hi = b;
        const auto r = seg(lo, hi, +1);
        total.m0 += r.m0;
        total.m1 += r.m1;
        total.m2 += r.m2;
    }
    // negative support piece, reflected
    {
        const double lo = std::max(-b, xm), hi = -a;
        const auto r = seg(lo, hi, -1);
        total.m0 += r.m0;
        total.m1 += r.m1;
        total.m2 += r.m2;
    }
    return total;
}

PartialMoments one_sided_pareto_pm(const OneSidedParams& pp, double a, double b) {
    PartialMoments r;
    const double lo_u = std::max(a + pp.m, pp.xm);
    const double hi_u = b + pp.m;
    if (!(hi_u > lo_u)) return r;
    const double c = pp.alpha * std::pow(pp.xm, pp.alpha);
    const auto A0 = [&](double u) { return -c * std::pow(u, -pp.alpha) / pp.alpha; };
    const auto A1 = [&](double u) {
        return c * (std::pow(u, 1.0 - pp.alpha) / (1.0 - pp.alpha) +
                    pp.m * std::pow(u, -pp.alpha) / pp.alpha);
    };
    const auto A2 = [&](double u) {
        return c * (std::pow(u, 2.0 - pp.alpha) / (2.0 - pp.alpha) +
                    2.0 * pp.m * std::pow(u, 1.0 - pp.alpha) / (pp.alpha - 1.0) -
                    pp.m * pp.m * std::pow(u, -pp.alpha) / pp.alpha);
    };
    r.m0 = A0(hi_u) - A0(lo_u);
    r.m1 = A1(hi_u) - A1(lo_u);
    r.m2 = A2(hi_u) - A2(lo_u);
    return r;
}

PartialMoments rademacher_pm(double a, double b) {
    PartialMoments r;
    for (double s : {-1.0, 1.0}) {
        if (s > a && s <= b) {
            r.m0 += 0.5;
            r.m1 += 0.5 * s;
            r.m2 += 0.5;
        }
    }
    return r;
}

PartialMoments stable_pm(const JumpSpec& spec, double a, double b) {
    const double sc = spec.p2, al = spec.p1;
    const double za = a / sc, zb = b / sc;
    std::ostringstream what;
    what << spec.describe() << " on (" << a << ", " << b << "]";
    const auto f = [&](double z) { return detail::symmetric_stable_density(al, z); };
    PartialMoments r;
    r.m0 = quad::integrate(f, za, zb, 1e-11, what.str());
    r.m1 = sc * quad::integrate([&](double z) { return z * f(z); }, za, zb, 1e-11,
                                what.str());
    r.m2 = sc * sc * quad::integrate([&](double z) { return z * z * f(z); }, za, zb,
                                     1e-10, what.str());
    return r;
}

} // namespace

PartialMoments partial_moments(const JumpSpec& spec, double a, double b) {
    if (!(b >= a)) throw std::invalid_argument("partial_moments: need a <= b");
    if (a == b) return {};
    switch (spec.kind) {
        case JumpKind::Gaussian:
            return gaussian_pm(spec.p1, a, b);
        case JumpKind::ExpDifference:
            return laplace_pm(spec.p1, a, b);
        case JumpKind::TwoSidedPareto:
            return two_sided_pareto_pm(spec.p1, spec.p2, a, b);
        case JumpKind::OneSidedParetoCentered:
            return one_sided_pareto_pm(one_sided_params(spec), a, b);
        case JumpKind::Rademacher:
            return rademacher_pm(a, b);
        case JumpKind::SymmetricStable: {
            if (spec.p1 == 2.0)
                return gaussian_pm(std::sqrt(2.0) * spec.p2, a, b);
            return stable_pm(spec, a, b);
        }
        case JumpKind::ServiceMinusShiftedArrival: {
            // X = L - shift with L Laplace(beta)
            const double s = spec.p2;
            const auto lp = laplace_pm(spec.p1, a + s, b + s);
            PartialMoments r;
            r.m0 = lp.m0;
            r.m1 = lp.m1 - s * lp.m0;
            r.m2 = lp.m2 - 2.0 * s * lp.m1 + s * s * lp.m0;
            return r;
        }
    }
    throw std::logic_error("unreachable jump kind");
}

double truncated_second_moment(const JumpSpec& spec, double x) {
    if (x < 0.0) throw std::invalid_argument("truncated_second_moment: x must be >= 0");
    if (x == 0.0) return 0.0;
    return partial_moments(spec, -x, x).m2;
}

double tail_probability(const JumpSpec& spec, double x) {
    if (x < 0.0) throw std::invalid_argument("tail_probability: x must be >= 0");
    if (x == 0.0) return 1.0;
    switch (spec.kind) {
        case JumpKind::Gaussian:
            return std::erfc(x / (spec.p1 * std::sqrt(2.0)));
        case JumpKind::ExpDifference:
            return std::exp(-spec.p1 * x);
        case JumpKind::TwoSidedPareto:
            return x < spec.p2 ? 1.0 : std::pow(spec.p2 / x, spec.p1);
        case JumpKind::OneSidedParetoCentered: {
            const auto pp = one_sided_params(spec);
            double tail = std::pow(pp.xm / (pp.m + x), pp.alpha);
            if (pp.m - x > pp.xm)
                tail += 1.0 - std::pow(pp.xm / (pp.m - x), pp.alpha);
            return tail;
        }
        case JumpKind::Rademacher:
            return x < 1.0 ? 1.0 : 0.0;
        case JumpKind::SymmetricStable: {
            if (spec.p1 == 2.0)
                return std::erfc(x / (2.0 * spec.p2));
            return detail::stable_std_tail(spec.p1, x / spec.p2);
        }
        case JumpKind::ServiceMinusShiftedArrival: {
            const double beta = spec.p1, s = spec.p2;
            const double up = 0.5 * std::exp(-beta * (x + s)); // P(X > x)
            double down; // P(X < -x) = P(L < s - x)
            if (s - x <= 0.0)
                down = 0.5 * std::exp(-beta * (x - s));
            else
                down = 1.0 - 0.5 * std::exp(-beta * (s - x));
            return up + down;
        }
    }
    throw std::logic_error("unreachable jump kind");
}

double truncated_mean_abs(const JumpSpec& spec, double x) {
    if (x < 0.0) throw std::invalid_argument("truncated_mean_abs: x must be >= 0");
    if (x == 0.0) return 0.0;
    switch (spec.kind) {
        case JumpKind::Gaussian:
        case JumpKind::ExpDifference:
        case JumpKind::TwoSidedPareto:
        case JumpKind::Rademacher:
        case JumpKind::SymmetricStable:
            return 0.0; // symmetric laws
        default:
            return std::fabs(partial_moments(spec, -x, x).m1);
    }
}

std::map<std::string, std::string> JumpSpec::to_config_block() const {
    std::map<std::string, std::string> kv;
    const auto num = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    };
    switch (kind) {
        case JumpKind::Gaussian:
            kv["kind"] = "gaussian";
            kv["sigma"] = num(p1);
            break;
        case JumpKind::ExpDifference:
            kv["kind"] = "exp_difference";
            kv["beta"] = num(p1);
            break;
        case JumpKind::TwoSidedPareto:
            kv["kind"] = "two_sided_pareto";
            kv["alpha"] = num(p1);
            kv["xmin"] = num(p2);
            break;
        case JumpKind::OneSidedParetoCentered:
            kv["kind"] = "one_sided_pareto_centered";
            kv["alpha"] = num(p1);
            kv["xmin"] = num(p2);
            break;
        case JumpKind::Rademacher:
            kv["kind"] = "rademacher";
            break;
        case JumpKind::SymmetricStable:
            kv["kind"] = "symmetric_stable";
            kv["alpha"] = num(p1);
            kv["scale"] = num(p2);
            break;
        case JumpKind::ServiceMinusShiftedArrival:
            kv["kind"] = "service_minus_shifted_arrival";
            kv["beta"] = num(p1);
            kv["shift"] = num(p2);
            break;
    }
    kv["centered"] = centered ? "true" : "false";
    return kv;
}

JumpSpec JumpSpec::from_config_block(const std::map<std::string, std::string>& kv) {
    const auto get = [&](const std::string& key) -> double {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw ConfigError("jump block missing key '" + key + "'");
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw ConfigError("jump key '" + key + "' is not a number: " + it->second);
        }
    };
    const auto it = kv.find("kind");
    if (it == kv.end()) throw ConfigError("jump block missing key 'kind'");
    const std::string& kind = it->second;

    JumpSpec spec;
    if (kind == "gaussian")
        spec = gaussian(get("sigma"));
    else if (kind == "exp_difference")
        spec = exp_difference(get("beta"));
    else if (kind == "two_sided_pareto")
        spec = two_sided_pareto(get("alpha"), get("xmin"));
    else if (kind == "one_sided_pareto_centered")
        spec = one_sided_pareto_centered(get("alpha"), get("xmin"));
    else if (kind == "rademacher")
        spec = rademacher();
    else if (kind == "symmetric_stable")
        spec = symmetric_stable(get("alpha"), get("scale"));
    else if (kind == "service_minus_shifted_arrival")
        spec = service_minus_shifted_arrival(get("beta"), get("shift"));
    else
        throw ConfigError("unknown jump kind '" + kind + "'");

    const auto c = kv.find("centered");
    if (c != kv.end()) {
        const bool want = (c->second == "true" || c->second == "1");
        if (want != spec.centered)
            throw ConfigError("centered flag contradicts jump kind '" + kind + "'");
    }
    for (const auto& [key, value] : kv) {
        (void)value;
        static const char* known[] = {"kind", "sigma", "beta",  "alpha",
                                      "xmin", "scale", "shift", "centered"};
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown key in jump block: '" + key + "'");
    }
    return spec;
}

} // namespace walkmax::jumps
