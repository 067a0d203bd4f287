#ifndef WALKMAX_JUMPS_HPP
#define WALKMAX_JUMPS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "walkmax/rng.hpp"

namespace walkmax::jumps {

enum class JumpKind {
    Gaussian,                   // N(0, sigma^2)
    ExpDifference,              // U - V, U,V iid Exp(beta)  (Laplace(beta))
    TwoSidedPareto,             // symmetric density (alpha/2) xmin^alpha |x|^-(alpha+1), |x| >= xmin
    OneSidedParetoCentered,     // P - E[P] with P Pareto(alpha, xmin)
    Rademacher,                 // +/-1 equiprobable
    SymmetricStable,            // characteristic exponent -|scale*t|^alpha
    ServiceMinusShiftedArrival, // U - (V + shift), U,V iid Exp(beta); non-centered oracle law
};

// Descriptor of a jump distribution in the domain of attraction of a stable
// law. Parameters are validated at construction; sampling and moment queries
// never fail afterwards (except for quadrature diagnostics).
struct JumpSpec {
    JumpKind kind = JumpKind::Gaussian;
    double p1 = 1.0; // sigma / beta / alpha / scale position, by kind
    double p2 = 0.0; // xmin / scale / shift, by kind
    bool centered = true;

    static JumpSpec gaussian(double sigma);
    static JumpSpec exp_difference(double beta);
    static JumpSpec two_sided_pareto(double alpha, double xmin);
    static JumpSpec one_sided_pareto_centered(double alpha, double xmin);
    static JumpSpec rademacher();
    static JumpSpec symmetric_stable(double alpha, double scale);
    static JumpSpec service_minus_shifted_arrival(double beta, double shift);

    // Stability index of the attracting law (2 for all finite-variance kinds).
    double alpha() const;
    // Var(X) for finite-variance kinds, +inf otherwise.
    double variance() const;
    // Mean of the law (0 for centered kinds).
    double mean() const;
    // Smallest |x| carrying mass; 0 for laws with mass near the origin.
    double support_radius_min() const;
    bool has_density() const { return kind != JumpKind::Rademacher; }

    std::string describe() const;
    std::map<std::string, std::string> to_config_block() const;
    static JumpSpec from_config_block(const std::map<std::string, std::string>& kv);
};

double sample(const JumpSpec& spec, Rng& rng);

// Lebesgue density at x (throws for Rademacher).
double density(const JumpSpec& spec, double x);

struct PartialMoments {
    double m0 = 0.0; // P(A < X <= B)
    double m1 = 0.0; // E(X; A < X <= B)
    double m2 = 0.0; // E(X^2; A < X <= B)
};

// Closed-form partial moments over (a, b]; SymmetricStable falls back to
// series-density quadrature.
PartialMoments partial_moments(const JumpSpec& spec, double a, double b);

// V(x) = E(X^2; |X| <= x).
double truncated_second_moment(const JumpSpec& spec, double x);

// P(|X| > x).
double tail_probability(const JumpSpec& spec, double x);

// |E(X; |X| <= x)|.
double truncated_mean_abs(const JumpSpec& spec, double x);

namespace detail {
// Standard symmetric stable density (scale 1, characteristic exponent
// -|t|^alpha), alpha in (1,2].
double symmetric_stable_density(double alpha, double x);
} // namespace detail

} // namespace walkmax::jumps

#endif
