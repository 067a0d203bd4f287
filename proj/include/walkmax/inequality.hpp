#ifndef WALKMAX_INEQUALITY_HPP
#define WALKMAX_INEQUALITY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "walkmax/jumps.hpp"

namespace walkmax::inequality {

struct SweepCell {
    std::uint64_t n = 0;
    double x = 0.0;
    double p_hat = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0; // n V(x) / x^2
    double ratio = 0.0; // p_hat / bound, 0 when the cell is rare
    bool rare = false;  // bound < 1e-4: reported, excluded from C_hat
};

struct InequalityReport {
    jumps::JumpSpec spec;
    std::vector<SweepCell> cells;
    double c_hat = 0.0; // max ratio over non-rare cells
};

// Monte Carlo sweep of P(max_{k<=n} S_k >= x) (undrifted walk) against the
// bound n V(x)/x^2. All n share one set of paths of length max(n_grid), so
// the per-cell estimates are coupled and monotone in n pathwise.
InequalityReport maximal_ratio_sweep(const jumps::JumpSpec& spec,
                                     const std::vector<std::uint64_t>& n_grid,
                                     const std::vector<double>& x_grid,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned workers = 0);

// Same sweep with x expressed as multiples of c_n (so the x column varies
// with n).
InequalityReport maximal_ratio_sweep_rel(const jumps::JumpSpec& spec,
                                         const std::vector<std::uint64_t>& n_grid,
                                         const std::vector<double>& theta_grid,
                                         std::uint64_t trials, std::uint64_t seed,
                                         unsigned workers = 0);

struct KaramataResult {
    double max_ratio = 0.0;
    std::pair<double, double> attained_at = {0.0, 0.0};
};

// max over pairs (x, y >= x) of [V(y)/V(x)] / (y/x)^(2-alpha+gamma).
KaramataResult karamata_check(const jumps::JumpSpec& spec, double gamma,
                              const std::vector<std::pair<double, double>>& pairs);

struct PruittComponents {
    double x = 0.0;
    double tail_ratio = 0.0; // P(|X|>x) x^2 / V(x)
    double mean_ratio = 0.0; // |E(X; |X|<=x)| x / V(x)
    bool degenerate = false; // V(x) = 0
};

// Component ratios of the one-step bound over a grid.
std::vector<PruittComponents> pruitt_component_check(const jumps::JumpSpec& spec,
                                                     const std::vector<double>& x_grid);

} // namespace walkmax::inequality

#endif
