#include "walkmax/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "walkmax/errors.hpp"
#include "walkmax/parallel.hpp"
#include "walkmax/quadrature.hpp"

namespace walkmax::limits {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

LimitLawSpec LimitLawSpec::exponential_limit(double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    LimitLawSpec s;
    s.kind = Kind::ExponentialLimit;
    s.sigma2 = sigma2;
    return s;
}

LimitLawSpec LimitLawSpec::standardized_exponential() {
    LimitLawSpec s;
    s.kind = Kind::StandardizedExponential;
    return s;
}

LimitLawSpec LimitLawSpec::mittag_leffler(double alpha, double c) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (1,2)");
    if (!(c > 0.0)) throw std::invalid_argument("scale c must be positive");
    LimitLawSpec s;
    s.kind = Kind::MittagLeffler;
    s.alpha = alpha;
    s.scale = c;
    return s;
}

LimitLawSpec LimitLawSpec::monte_carlo_stable(double alpha, SkewTag skew) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw std::invalid_argument("alpha must lie in (1,2]");
    LimitLawSpec s;
    s.kind = Kind::MonteCarloStable;
    s.alpha = alpha;
    s.skew = skew;
    return s;
}

double LimitLawSpec::cdf(double x) const {
    switch (kind) {
        case Kind::ExponentialLimit:
            return x <= 0.0 ? 0.0 : kingman_cdf(x, sigma2);
        case Kind::StandardizedExponential:
            return standardized_exponential_cdf(x);
        case Kind::MittagLeffler:
            return x <= 0.0 ? 0.0
                            : 1.0 - mstar_tail_spectrally_positive(x, alpha, scale);
        case Kind::MonteCarloStable:
            throw std::logic_error(
                "the Monte Carlo stable law has no closed CDF; simulate it");
    }
    throw std::logic_error("unreachable limit-law kind");
}

double kingman_cdf(double x, double sigma2) {
    if (x < 0.0) throw std::invalid_argument("kingman_cdf: x must be >= 0");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("kingman_cdf: sigma2 must be positive");
    return 1.0 - std::exp(-2.0 * x / sigma2);
}

double standardized_exponential_cdf(double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-2.0 * x);
}

namespace {

double ml_series(double beta, double x) {
    // E_beta(-x) by direct summation; safe while the largest term stays small
    double sum = 0.0;
    const double lx = std::log(x);
    for (int k = 0;; ++k) {
        if (k > 400) throw NumericError("mittag_leffler_e: series did not converge");
        const double term =
            k == 0 ? 1.0 : std::exp(k * lx - std::lgamma(beta * k + 1.0));
        sum += (k % 2 == 0) ? term : -term;
        if (k > 2 && term < 1e-18) return sum;
    }
}

// E_beta(-x) = (x sin(pi beta)/pi) * int_0^inf e^{-s} s^{beta-1}
//              / (s^{2beta} + 2 x s^beta cos(pi beta) + x^2) ds,
// split so the s^{beta-1} endpoint singularity integrates exactly.
double ml_integral(double beta, double x) {
    const double sb = std::sin(kPi * beta);
    const double cb = std::cos(kPi * beta);
    const double front = x * sb / kPi;
    const auto core = [&](double s) {
        const double sbpow = std::pow(s, beta);
        return std::exp(-s) / (sbpow * sbpow + 2.0 * x * sbpow * cb + x * x);
    };
    // s in (0,1]: substitute s = tau^{1/beta}, absorbing s^{beta-1} ds = dtau/beta
    const auto low = [&](double tau) {
        const double s = std::pow(tau, 1.0 / beta);
        return core(s) / beta;
    };
    const double part1 = quad::integrate(low, 0.0, 1.0, 2e-12, "mittag-leffler low");
    // s in [1, 45]: e^{-45} is below tolerance
    const auto high = [&](double s) { return core(s) * std::pow(s, beta - 1.0); };
    const double part2 = quad::integrate(high, 1.0, 45.0, 2e-12, "mittag-leffler high");
    return front * (part1 + part2);
}

} // namespace

double mittag_leffler_e(double beta, double z) {
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("mittag_leffler_e: beta must lie in (0,1]");
    if (z > 0.0)
        throw std::invalid_argument("mittag_leffler_e: z must be <= 0");
    if (z == 0.0) return 1.0;
    const double x = -z;
    if (beta == 1.0) return std::exp(-x);
    if (x <= 0.5) return ml_series(beta, x);
    if (x < 2.0) {
        // handover band: evaluate both routes and insist they agree
        const double s = ml_series(beta, x);
        const double q = ml_integral(beta, x);
        if (std::fabs(s - q) > 1e-8)
            throw NumericError("mittag_leffler_e: series/integral switchover disagreement");
        return q;
    }
    return ml_integral(beta, x);
}

double mstar_tail_spectrally_positive(double x, double alpha, double c) {
    if (!(x > 0.0)) return 1.0;
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw std::invalid_argument("alpha must lie in (1,2]");
    if (!(c > 0.0)) throw std::invalid_argument("scale c must be positive");
    return mittag_leffler_e(alpha - 1.0, -c * std::pow(x, alpha - 1.0));
}

double stable_increment(double alpha, SkewTag skew, Rng& rng) {
    if (alpha == 2.0) return rng.gaussian();
    const double beta = skew == SkewTag::Symmetric
                            ? 0.0
                            : (skew == SkewTag::SpectrallyPositive ? 1.0 : -1.0);
    const double theta = kPi * (rng.uniform01() - 0.5);
    const double w = rng.exponential(1.0);
    if (beta == 0.0) {
        return std::sin(alpha * theta) / std::pow(std::cos(theta), 1.0 / alpha) *
               std::pow(std::cos((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
    }
    const double tb = beta * std::tan(0.5 * kPi * alpha);
    const double theta0 = std::atan(tb) / alpha;
    const double d = std::pow(1.0 + tb * tb, 0.5 / alpha);
    return d * std::sin(alpha * (theta + theta0)) /
           std::pow(std::cos(theta), 1.0 / alpha) *
           std::pow(std::cos(theta - alpha * (theta + theta0)) / w,
                    (1.0 - alpha) / alpha);
}

LaplaceEstimate mstar_laplace_mc(double mu, double alpha, SkewTag skew,
                                 const QuadratureWindow& window,
                                 std::uint64_t seed, unsigned workers) {
    if (mu < 0.0) throw std::invalid_argument("mu must be >= 0");
    if (!(window.eps > 0.0 && window.eps < 1.0 && window.T > 1.0))
        throw std::invalid_argument("window must satisfy 0 < eps < 1 < T");
    if (window.nodes < 2 || window.samples_per_node == 0)
        throw std::invalid_argument("window needs nodes >= 2 and samples");

    LaplaceEstimate out;
    out.eps_bound = mu * std::pow(window.eps, 1.0 / alpha);
    out.T_bound = std::pow(window.T, 1.0 - alpha);
    if (mu == 0.0) return out; // integrand vanishes identically

    const int n = window.nodes;
    const double w_lo = std::log(window.eps), w_hi = std::log(window.T);
    const double h = (w_hi - w_lo) / (n - 1);

    // one chunk per node; in log coordinates the 1/v weight is absorbed
    std::vector<double> means(n, 0.0), vars(n, 0.0);
    const auto chunks = make_chunks(static_cast<std::uint64_t>(n), n);
    for_each_chunk(chunks, seed, workers, [&](const ChunkRange& ch, Rng& rng) {
        const int i = static_cast<int>(ch.index);
        const double v = std::exp(w_lo + h * i);
        const double scale = std::pow(v, 1.0 / alpha);
        double sum = 0.0, sumsq = 0.0;
        for (std::uint64_t s = 0; s < window.samples_per_node; ++s) {
            const double excur = scale * stable_increment(alpha, skew, rng) - v;
            const double val = excur > 0.0 ? 1.0 - std::exp(-mu * excur) : 0.0;
            sum += val;
            sumsq += val * val;
        }
        const double m = sum / static_cast<double>(window.samples_per_node);
        means[i] = m;
        vars[i] = std::max(0.0, sumsq / static_cast<double>(window.samples_per_node) -
                                    m * m) /
                  static_cast<double>(window.samples_per_node);
    });

    double integral = 0.0, var = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
        integral += w * means[i];
        var += w * w * vars[i];
    }
    out.estimate = std::exp(-integral);
    out.stderr_ = out.estimate * std::sqrt(var);
    if (window.stderr_tol > 0.0 && out.stderr_ > window.stderr_tol)
        throw NumericError("mstar_laplace_mc: stderr " + std::to_string(out.stderr_) +
                           " above requested tolerance");
    return out;
}

stats::EmpiricalDistribution mstar_sup_mc(double alpha, SkewTag skew, double T,
                                          std::uint64_t grid_steps,
                                          std::uint64_t trials,
                                          std::uint64_t seed, unsigned workers) {
    if (!(T >= 1.0)) throw std::invalid_argument("T must be >= 1");
    if (grid_steps == 0 || trials == 0)
        throw std::invalid_argument("grid_steps and trials must be positive");
    const long double total = static_cast<long double>(grid_steps) * trials;
    if (total > 1e11L)
        throw BudgetError("mstar_sup_mc: grid_steps x trials exceeds budget");

    const double dt = T / static_cast<double>(grid_steps);
    const double inc_scale = std::pow(dt, 1.0 / alpha);
    std::vector<double> samples(trials);
    const auto chunks = make_chunks(trials, (trials + 255) / 256);
    for_each_trial(chunks, seed, workers,
                   [&](const ChunkRange&, std::uint64_t p, Rng& rng) {
        Kahan s;
        double best = 0.0;
        for (std::uint64_t k = 0; k < grid_steps; ++k) {
            s.add(inc_scale * stable_increment(alpha, skew, rng) - dt);
            if (s.sum > best) best = s.sum;
        }
        samples[p] = best;
    });
    return stats::EmpiricalDistribution(std::move(samples), "mstar_sup_mc");
}

double tail_slope_estimate(const stats::EmpiricalDistribution& dist,
                           double quantile_lo, double quantile_hi) {
    if (dist.count() < 10000)
        throw std::invalid_argument("tail_slope_estimate: need >= 1e4 samples");
    if (!(quantile_lo < quantile_hi && quantile_lo > 0.0 && quantile_hi < 1.0))
        throw std::invalid_argument("tail_slope_estimate: bad quantile window");
    const auto& xs = dist.samples();
    const double n = static_cast<double>(xs.size());
    std::vector<std::pair<double, double>> pts;
    const std::size_t i_lo = static_cast<std::size_t>(quantile_lo * n);
    const std::size_t i_hi =
        std::min(xs.size() - 1, static_cast<std::size_t>(quantile_hi * n));
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
        const double surv = (n - static_cast<double>(i) - 1.0) / n;
        if (xs[i] > 0.0 && surv > 0.0 && (i + 1 == xs.size() || xs[i + 1] > xs[i]))
            pts.emplace_back(xs[i], surv);
    }
    if (pts.size() < 30)
        throw std::invalid_argument("tail_slope_estimate: fewer than 30 points in window");
    return stats::loglog_slope(pts).slope;
}

MlCalibration calibrate_ml_scale(const stats::EmpiricalDistribution& dist,
                                 double alpha) {
    const auto ks_at = [&](double c) {
        return stats::ks_distance(dist, [&](double x) {
            return x <= 0.0 ? 0.0 : 1.0 - mstar_tail_spectrally_positive(x, alpha, c);
        });
    };
    // golden-section on log c over a wide bracket
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(1e-2), hi = std::log(1e2);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = ks_at(std::exp(x1)), f2 = ks_at(std::exp(x2));
    for (int i = 0; i < 60; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = ks_at(std::exp(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = ks_at(std::exp(x2));
        }
    }
    const double c = std::exp(0.5 * (lo + hi));
    return {c, ks_at(c)};
}

} // namespace walkmax::limits
