#ifndef WALKMAX_LIMIT_LAWS_HPP
#define WALKMAX_LIMIT_LAWS_HPP

#include <cstdint>

#include "walkmax/rng.hpp"
#include "walkmax/stats.hpp"

namespace walkmax::limits {

enum class SkewTag { Symmetric, SpectrallyPositive, SpectrallyNegative };

// Tagged description of a limit law for the supremum. The Monte Carlo kind
// has no closed CDF and is realized through mstar_sup_mc.
struct LimitLawSpec {
    enum class Kind {
        ExponentialLimit,        // 1 - exp(-2x/sigma2)
        StandardizedExponential, // rate 2
        MittagLeffler,           // 1 - E_{alpha-1}(-c x^{alpha-1})
        MonteCarloStable,
    };
    Kind kind = Kind::StandardizedExponential;
    double sigma2 = 1.0;
    double alpha = 2.0;
    double scale = 1.0;
    SkewTag skew = SkewTag::Symmetric;

    static LimitLawSpec exponential_limit(double sigma2);
    static LimitLawSpec standardized_exponential();
    static LimitLawSpec mittag_leffler(double alpha, double c);
    static LimitLawSpec monte_carlo_stable(double alpha, SkewTag skew);

    bool has_closed_cdf() const { return kind != Kind::MonteCarloStable; }
    double cdf(double x) const; // throws for the Monte Carlo kind
};

// CDF of the all-time maximum of Brownian motion with variance sigma2 and
// unit negative drift: 1 - exp(-2x/sigma2).
double kingman_cdf(double x, double sigma2);

// Rate-2 exponential CDF; the sigma2 = 1 slice of the above.
double standardized_exponential_cdf(double x);

// Mittag-Leffler function E_beta(z) for beta in (0,1], z <= 0.
// Power series near the origin, a monotone integral representation beyond it;
// both are evaluated and cross-checked in the handover band.
double mittag_leffler_e(double beta, double z);

// P(M* > x) = E_{alpha-1}(-c x^{alpha-1}); the scale c is a calibration
// input, not a constant of the family.
double mstar_tail_spectrally_positive(double x, double alpha, double c);

// One increment of the standard stable law used for the limit process.
// alpha = 2 yields a standard normal (the scale under V-based norming);
// alpha < 2 uses the polar transform with extreme skew for the one-sided tags.
double stable_increment(double alpha, SkewTag skew, Rng& rng);

struct QuadratureWindow {
    double eps = 1e-4;   // lower cut, in (0,1)
    double T = 60.0;     // upper cut, > 1
    int nodes = 257;     // log-spaced nodes on [eps, T]
    std::uint64_t samples_per_node = 20000;
    double stderr_tol = 0.0; // 0: no tolerance enforcement
};

struct LaplaceEstimate {
    double estimate = 1.0;
    double stderr_ = 0.0;
    double eps_bound = 0.0; // inner window budget, mu * eps^(1/alpha)
    double T_bound = 0.0;   // outer window budget, T^(1-alpha)
};

// Monte Carlo/log-trapezoid estimate of
//   exp{ -int_eps^T v^{-1} E(1 - e^{-mu (xi_v - v)}; xi_v - v > 0) dv },
// with xi_v sampled as v^{1/alpha} xi_1.
LaplaceEstimate mstar_laplace_mc(double mu, double alpha, SkewTag skew,
                                 const QuadratureWindow& window,
                                 std::uint64_t seed, unsigned workers = 0);

// Grid supremum of xi_t - t over [0, T]; boundary-crossing bias is O(dt) and
// shrinks with grid_steps.
stats::EmpiricalDistribution mstar_sup_mc(double alpha, SkewTag skew, double T,
                                          std::uint64_t grid_steps,
                                          std::uint64_t trials,
                                          std::uint64_t seed,
                                          unsigned workers = 0);

// Least-squares slope of log P(M > x) against log x between two empirical
// quantiles. Requires >= 1e4 samples and >= 30 points in the window.
double tail_slope_estimate(const stats::EmpiricalDistribution& dist,
                           double quantile_lo, double quantile_hi);

struct MlCalibration {
    double c = 1.0;  // fitted scale
    double ks = 1.0; // KS distance at the fitted scale
};

// Scale of the Mittag-Leffler tail law fitted to an empirical distribution by
// KS minimization.
MlCalibration calibrate_ml_scale(const stats::EmpiricalDistribution& dist,
                                 double alpha);

} // namespace walkmax::limits

#endif
