#ifndef WALKMAX_WALKSIM_HPP
#define WALKMAX_WALKSIM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walkmax/jumps.hpp"
#include "walkmax/rng.hpp"

namespace walkmax::walksim {

// Zero-mean overlay added on top of the jump sequence.
struct PerturbationSpec {
    enum class Law { Uniform, Rademacher };
    Law law = Law::Uniform;
    double amplitude = 1.0;    // uniform on [-b,b] or +/-b
    double gamma_moment = 4.0; // exponent with finite absolute moment

    static PerturbationSpec uniform(double b, double gamma = 4.0);
    static PerturbationSpec rademacher(double b, double gamma = 4.0);

    double variance() const;
    double sample(Rng& rng) const;
};

struct WalkConfig {
    jumps::JumpSpec spec;
    double a = 0.1;      // drift subtracted per step; 0 only for oracle specs
    double T = 1.0;      // horizon multiplier, K = ceil(T * n(a))
    std::uint64_t trials = 1;
    std::uint64_t seed = 1;
    std::optional<PerturbationSpec> perturbation;
    std::uint64_t horizon_override = 0; // explicit K; required when a == 0
    std::uint64_t max_steps = 10000000000ULL;
    unsigned workers = 0; // 0: WALKMAX_THREADS env or hardware
};

// i.i.d. samples of the truncated maximum, with seed lineage and the dyadic
// truncation-tail certificate of the horizon.
struct MaxSampleBatch {
    std::vector<double> samples;       // max_{0<=k<=K} (S_k - k a), >= 0
    std::vector<double> argmax_ratios; // argmax k divided by n(a)
    std::uint64_t horizon = 0;
    std::uint64_t n_a = 0;   // 0 for driftless oracle runs
    double a = 0.0;
    double c_scale = 0.0;    // c_{n(a)} of the effective jump law; 0 if a == 0
    std::uint64_t seed = 0;
    double certificate = 0.0; // 0 when not applicable (a == 0)
};

// Truncated second moment of the effective jump law (spec plus optional
// perturbation overlay).
double effective_truncated_second_moment(
    const jumps::JumpSpec& spec, const std::optional<PerturbationSpec>& pert,
    double x);
double effective_support_radius_min(const jumps::JumpSpec& spec,
                                    const std::optional<PerturbationSpec>& pert);

// n(a) and c_{n(a)} computed from the effective jump law.
std::uint64_t effective_n_of_a(const WalkConfig& cfg);
double effective_c_scale(const WalkConfig& cfg);

MaxSampleBatch simulate_max_batch(const WalkConfig& cfg);

// Dyadic-sum bound skeleton (generic constant set to 1) for the probability
// that the walk reaches a new record after horizon T*n(a):
//   B(T) = sum_j 2^{j+1} n T V(2^j a n T) / (2^j a n T)^2.
double truncation_certificate(const WalkConfig& cfg);

struct ProbeResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
};

// Monte Carlo estimate of P(max_{T_lo n(a) <= k <= T_hi n(a)} S_k^(a) >= 0).
ProbeResult truncation_tail_probe(const WalkConfig& cfg, double T_lo, double T_hi);

// Same estimate for several lower cuts sharing one set of paths.
std::vector<ProbeResult> truncation_tail_sweep(const WalkConfig& cfg,
                                               const std::vector<double>& T_lo_list,
                                               double T_hi);

// Root in (0,1) of sigma = exp(-shift*beta*(1-sigma)) / (2-sigma); the
// geometric parameter of the all-time maximum for increments
// Exp(beta) - (shift + Exp(beta)). Requires shift > 0.
double gim1_sigma_star(double beta, double shift);

// P(M > x) = sigma* exp(-beta (1-sigma*) x).
double exact_gim1_tail(double beta, double shift, double x);

} // namespace walkmax::walksim

#endif
