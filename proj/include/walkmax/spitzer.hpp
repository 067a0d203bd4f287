#ifndef WALKMAX_SPITZER_HPP
#define WALKMAX_SPITZER_HPP

#include <cstdint>
#include <vector>

#include "walkmax/jumps.hpp"

namespace walkmax::spitzer {

struct SpitzerConfig {
    jumps::JumpSpec spec;
    double a = 0.1;
    std::vector<double> mu_grid;
    double eps = 0.1; // split parameters, 0 < eps < 1 < T
    double T = 10.0;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::uint64_t max_steps = 10000000000ULL;
    unsigned workers = 0;
};

// Estimates of the series terms
//   t_k = (1/k) E(1 - exp(-mu S_k^(a) / c_{n(a)}); S_k^(a) > 0),
// one simulated path of length K feeding every k at once.
struct SpitzerResult {
    std::uint64_t horizon = 0;
    std::uint64_t n_a = 0;
    double a = 0.0;
    double c_na = 0.0;
    double eps = 0.0;
    double T = 0.0;
    std::uint64_t trials = 0;
    std::vector<double> mu_grid;
    // per-mu, per-k (k = index+1) term means and standard errors
    std::vector<std::vector<double>> t_k;
    std::vector<std::vector<double>> t_k_se;
    // positive-part means of the undrifted walk, E(S_k; S_k > 0)
    std::vector<double> pos_part;
    // per-mu series sums over k <= K with path-level standard errors
    std::vector<double> sum_t;
    std::vector<double> sum_se;
    std::vector<double> laplace;    // exp(-sum_t)
    std::vector<double> laplace_se; // delta-method
    std::vector<double> sigma1;     // sum over k <= eps n(a)
    std::vector<double> sigma2;     // sum over eps n(a) < k <= T n(a)
    double sigma3_bound = 0.0;      // integral-comparison skeleton, C = 1
};

SpitzerResult estimate_terms(const SpitzerConfig& cfg);

// Re-summation of the lower split at another eps.
double sigma1_at(const SpitzerResult& result, std::size_t mu_index, double eps);

struct SigmaSplit {
    double mu = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma3_bound = 0.0;
};

std::vector<SigmaSplit> sigma_split_report(const SpitzerResult& result);

// The tail-sum skeleton sum_{k > T n(a)} V(ka)/(ka)^2 evaluated by integral
// comparison, (1/a) int_{T a n(a)}^inf V(x)/x^2 dx.
double sigma3_bound(const jumps::JumpSpec& spec, double a, std::uint64_t n_a,
                    double T);

struct IntegrandComparePoint {
    double mu = 0.0;
    double v = 0.0;
    std::uint64_t k = 0;
    double scaled_term = 0.0;    // n(a) * t_k
    double scaled_term_se = 0.0;
    double limit_integrand = 0.0; // v^{-1} E(1 - e^{-mu (xi_v - v)}; xi_v > v)
    double limit_se = 0.0;
    double diff = 0.0;
    double joint_se = 0.0;
};

// Compares the rescaled series terms against the limit-process integrand at
// v = k/n(a). Exact in scale at alpha = 2; qualitative otherwise.
std::vector<IntegrandComparePoint> integrand_limit_compare(
    const SpitzerConfig& cfg, const std::vector<double>& v_points,
    std::uint64_t limit_trials = 200000);

struct WhMuRow {
    double mu = 0.0;
    double series_side = 0.0; // exp(-sum_k t_k)
    double series_se = 0.0;
    double direct_side = 0.0; // empirical transform of simulated maxima
    double direct_se = 0.0;
    double diff = 0.0;
    double budget = 0.0; // 3 joint se + sigma3 bound + truncation certificate
    bool pass = false;
};

struct WhReport {
    std::vector<WhMuRow> rows;
    double sigma3 = 0.0;
    double certificate = 0.0;
    bool pass = false;
};

// Checks exp(-sum t_k) against the empirical Laplace transform of directly
// simulated maxima at matching horizon.
WhReport wiener_hopf_consistency(const SpitzerConfig& cfg);

} // namespace walkmax::spitzer

#endif
