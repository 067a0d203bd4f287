#ifndef WALKMAX_NORMALIZE_HPP
#define WALKMAX_NORMALIZE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "walkmax/jumps.hpp"

namespace walkmax::normalize {

// Norming scale for horizon n: the last-exit point
//   c_n = sup{ u > 0 : V(u)/u^2 > 1/n },
// solved by bracketing plus bisection to relative tolerance 1e-9. When no u
// satisfies the condition the smallest support radius of |X| is returned.
double c_of_n(const jumps::JumpSpec& spec, double n);

// Same solver against an arbitrary truncated-second-moment function.
double c_of_n_fn(const std::function<double(double)>& V, double support_min,
                 double n);

// Heavy-traffic horizon: first n with c_n <= a*n. Throws when no crossing
// exists below n_max.
std::uint64_t n_of_a(const jumps::JumpSpec& spec, double a,
                     std::uint64_t n_max = 1000000000000ULL);
std::uint64_t n_of_a_fn(const std::function<double(double)>& V,
                        double support_min, double a,
                        std::uint64_t n_max = 1000000000000ULL);

// Tabulated (n, c_n) pairs on a geometric n-grid, with monotone log-linear
// interpolation between grid points. Immutable once built.
class NormalizationTable {
  public:
    NormalizationTable(jumps::JumpSpec spec, double n_lo, double n_hi,
                       double ratio = 1.1);

    const jumps::JumpSpec& spec() const { return spec_; }
    double alpha() const { return spec_.alpha(); }
    const std::vector<std::pair<double, double>>& entries() const {
        return entries_;
    }
    // interpolated c_n between grid points, exact at grid points
    double c_interp(double n) const;
    double n_lo() const { return entries_.front().first; }
    double n_hi() const { return entries_.back().first; }

  private:
    jumps::JumpSpec spec_;
    std::vector<std::pair<double, double>> entries_;
};

struct RvSlopes {
    double slope_c; // log c_n vs log n, expect 1/alpha
    double slope_n; // log n(a) vs log a, expect -alpha/(alpha-1)
};

// Least-squares regular-variation exponents. The c-slope is fit on the table
// entries (spanning at least three decades); the n-slope on a log grid of
// drifts over [a_lo, a_hi].
RvSlopes rv_slope_check(const NormalizationTable& table, double a_lo = 0.01,
                        double a_hi = 0.1, int a_points = 9);

} // namespace walkmax::normalize

#endif
