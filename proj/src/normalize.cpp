#include "walkmax/normalize.hpp"

#include <cmath>
#include <stdexcept>

#include "walkmax/errors.hpp"
#include "walkmax/stats.hpp"

namespace walkmax::normalize {

namespace {

constexpr double kUMax = 1e30;

// g(u) = V(u)/u^2 - 1/n. Regular variation makes g eventually negative and
// strictly so; the root of interest is the last sign change from + to -.
double last_exit_root(const std::function<double(double)>& V, double support_min,
                      double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("c_of_n: n must be >= 1");
    const double level = 1.0 / n;
    const auto g = [&](double u) { return V(u) / (u * u) - level; };

    // geometric scan for the last positive region
    const double u_lo = std::max(support_min > 0.0 ? 0.5 * support_min : 1e-9, 1e-12);
    const double step = std::pow(10.0, 0.0625); // 16 points per decade
    double last_pos = -1.0, bracket_hi = -1.0;
    double prev = u_lo;
    bool seen_positive = false;
    for (double u = u_lo; u <= kUMax; u *= step) {
        if (g(u) > 0.0) {
            seen_positive = true;
            last_pos = u;
        } else if (seen_positive && last_pos == prev) {
            bracket_hi = u;
        }
        prev = u;
    }
    if (!seen_positive) {
        // V(u)/u^2 never exceeds 1/n
        return support_min;
    }
    if (bracket_hi < 0.0)
        throw NumericError("c_of_n: no sign change found below 1e30");

    double lo = last_pos, hi = bracket_hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= 1e-9 * hi) break;
    }
    // lo sits inside the exceedance set, so the result never overshoots the
    // true last-exit point
    return lo;
}

} // namespace

double c_of_n_fn(const std::function<double(double)>& V, double support_min,
                 double n) {
    return last_exit_root(V, support_min, n);
}

double c_of_n(const jumps::JumpSpec& spec, double n) {
    return last_exit_root(
        [&](double u) { return jumps::truncated_second_moment(spec, u); },
        spec.support_radius_min(), n);
}

std::uint64_t n_of_a_fn(const std::function<double(double)>& V,
                        double support_min, double a, std::uint64_t n_max) {
    if (!(a > 0.0)) throw std::invalid_argument("n_of_a: a must be positive");
    // slack of a few ulps so an exact crossing (c_n == a n) is not missed to
    // solver tolerance
    const auto crossed = [&](std::uint64_t n) {
        return c_of_n_fn(V, support_min, static_cast<double>(n)) <=
               a * static_cast<double>(n) * (1.0 + 4e-9);
    };
    // Laws with mass near the origin have c_n = 0 for the first few n, which
    // satisfies the inequality vacuously. The meaningful crossing is the one
    // after the last n with c_n > a n, so scan doublings for that region
    // first.
    std::uint64_t last_false = 0, first_true_after = 0;
    for (std::uint64_t n = 1;; n *= 2) {
        if (n > n_max) break;
        if (!crossed(n)) {
            last_false = n;
        } else if (last_false > 0) {
            first_true_after = n;
            break;
        }
        if (n > n_max / 2) break;
    }
    if (last_false == 0) {
        // c_n <= a n on the whole scan: the drift is large enough that the
        // curves never cross. The nearest-match horizon is the n maximizing
        // c_n / n; any choice here satisfies a n(a) ~ c_{n(a)} as a -> 0.
        std::uint64_t best_n = 1;
        double best_ratio = -1.0;
        for (double nd = 1.0; nd <= 1048576.0; nd *= 1.25) {
            const std::uint64_t n = static_cast<std::uint64_t>(nd);
            const double c = c_of_n_fn(V, support_min, static_cast<double>(n));
            const double ratio = c / static_cast<double>(n);
            if (ratio > best_ratio) {
                best_ratio = ratio;
                best_n = n;
            }
        }
        if (best_n <= 4096) {
            for (std::uint64_t n = std::max<std::uint64_t>(1, best_n / 2);
                 n <= best_n * 2; ++n) {
                const double c = c_of_n_fn(V, support_min, static_cast<double>(n));
                const double ratio = c / static_cast<double>(n);
                if (ratio > best_ratio) {
                    best_ratio = ratio;
                    best_n = n;
                }
            }
        }
        return best_n;
    }
    if (first_true_after == 0)
        throw NumericError(
            "n_of_a: no crossing below n_max; a too small for tabulation");
    std::uint64_t lo = last_false, hi = first_true_after;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (crossed(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

std::uint64_t n_of_a(const jumps::JumpSpec& spec, double a, std::uint64_t n_max) {
    return n_of_a_fn(
        [&](double u) { return jumps::truncated_second_moment(spec, u); },
        spec.support_radius_min(), a, n_max);
}

NormalizationTable::NormalizationTable(jumps::JumpSpec spec, double n_lo,
                                       double n_hi, double ratio)
    : spec_(std::move(spec)) {
    if (!(n_lo >= 1.0 && n_hi > n_lo))
        throw std::invalid_argument("NormalizationTable: need 1 <= n_lo < n_hi");
    if (!(ratio > 1.0))
        throw std::invalid_argument("NormalizationTable: grid ratio must exceed 1");
    double prev_c = 0.0;
    for (double n = n_lo;; n *= ratio) {
        if (n > n_hi * (1.0 + 1e-12)) break;
        double c = c_of_n(spec_, n);
        c = std::max(c, prev_c); // solver tolerance must not break monotonicity
        entries_.emplace_back(n, c);
        prev_c = c;
    }
    if (entries_.back().first < n_hi) {
        double c = std::max(prev_c, c_of_n(spec_, n_hi));
        entries_.emplace_back(n_hi, c);
    }
}

double NormalizationTable::c_interp(double n) const {
    if (n <= entries_.front().first) return entries_.front().second;
    if (n >= entries_.back().first) return entries_.back().second;
    std::size_t lo = 0, hi = entries_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (entries_[mid].first <= n)
            lo = mid;
        else
            hi = mid;
    }
    const auto& [n0, c0] = entries_[lo];
    const auto& [n1, c1] = entries_[hi];
    if (c0 <= 0.0 || c1 <= 0.0) { // linear fallback near a degenerate origin
        const double w = (n - n0) / (n1 - n0);
        return c0 + w * (c1 - c0);
    }
    const double w = (std::log(n) - std::log(n0)) / (std::log(n1) - std::log(n0));
    return std::exp(std::log(c0) + w * (std::log(c1) - std::log(c0)));
}

RvSlopes rv_slope_check(const NormalizationTable& table, double a_lo, double a_hi,
                        int a_points) {
    if (table.n_hi() / table.n_lo() < 999.0)
        throw std::invalid_argument("rv_slope_check: table must span >= 3 decades");
    if (!(a_lo > 0.0 && a_hi > a_lo) || a_points < 2)
        throw std::invalid_argument("rv_slope_check: bad drift grid");

    std::vector<std::pair<double, double>> c_pts;
    for (const auto& [n, c] : table.entries())
        if (c > 0.0) c_pts.emplace_back(n, c);
    const auto c_fit = stats::loglog_slope(c_pts);

    std::vector<std::pair<double, double>> n_pts;
    const double r = std::pow(a_hi / a_lo, 1.0 / (a_points - 1));
    double a = a_lo;
    for (int i = 0; i < a_points; ++i, a *= r)
        n_pts.emplace_back(a, static_cast<double>(n_of_a(table.spec(), a)));
    const auto n_fit = stats::loglog_slope(n_pts);

    return {c_fit.slope, n_fit.slope};
}

} // namespace walkmax::normalize
