#ifndef WALKMAX_STATS_HPP
#define WALKMAX_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "walkmax/errors.hpp"

namespace walkmax::stats {

// Sorted sample set with ECDF / quantile / KS / empirical-transform queries.
class EmpiricalDistribution {
  public:
    EmpiricalDistribution(std::vector<double> samples, std::string provenance = {})
        : samples_(std::move(samples)), provenance_(std::move(provenance)) {
        if (samples_.empty())
            throw std::invalid_argument("EmpiricalDistribution needs at least one sample");
        std::sort(samples_.begin(), samples_.end());
    }

    const std::vector<double>& samples() const { return samples_; }
    std::size_t count() const { return samples_.size(); }
    const std::string& provenance() const { return provenance_; }
    double min() const { return samples_.front(); }
    double max() const { return samples_.back(); }

    // Fraction of samples <= x (right-continuous step function).
    double ecdf(double x) const {
        const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
        return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
    }

    double quantile(double p) const {
        if (p <= 0.0) return samples_.front();
        if (p >= 1.0) return samples_.back();
        const std::size_t idx =
            std::min(samples_.size() - 1,
                     static_cast<std::size_t>(p * static_cast<double>(samples_.size())));
        return samples_[idx];
    }

  private:
    std::vector<double> samples_;
    std::string provenance_;
};

// sup_x |ECDF(x) - F(x)| evaluated through both one-sided discrepancies at the
// sample points. Exact when F is continuous; for a step-function F it can be
// conservative by up to one jump of F.
inline double ks_distance(const EmpiricalDistribution& d,
                          const std::function<double(double)>& cdf) {
    const auto& xs = d.samples();
    const double n = static_cast<double>(xs.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        sup = std::max(sup, std::max(hi, lo));
    }
    return sup;
}

// sup_x |F1(x) - F2(x)| between two ECDFs, evaluated exactly at the merged
// jump points (shared atoms do not inflate the distance).
inline double ks_two_sample(const EmpiricalDistribution& a,
                            const EmpiricalDistribution& b) {
    const auto& xs = a.samples();
    const auto& ys = b.samples();
    const double na = static_cast<double>(xs.size());
    const double nb = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < xs.size() || j < ys.size()) {
        double x;
        if (j >= ys.size() || (i < xs.size() && xs[i] <= ys[j]))
            x = xs[i];
        else
            x = ys[j];
        while (i < xs.size() && xs[i] <= x) ++i;
        while (j < ys.size() && ys[j] <= x) ++j;
        sup = std::max(sup, std::fabs(static_cast<double>(i) / na -
                                      static_cast<double>(j) / nb));
    }
    return sup;
}

// Dvoretzky-Kiefer-Wolfowitz band half-width: sqrt(ln(2/delta) / (2n)).
inline double dkw_epsilon(std::uint64_t n, double delta) {
    if (n == 0) throw std::invalid_argument("dkw_epsilon: n must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("dkw_epsilon: delta must lie in (0,1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

// Mean of exp(-mu * sample) with its sample standard error.
inline std::pair<double, double> empirical_laplace(const EmpiricalDistribution& d,
                                                   double mu) {
    if (mu < 0.0) throw std::invalid_argument("empirical_laplace: mu must be >= 0");
    if (mu == 0.0) return {1.0, 0.0};
    double sum = 0.0, sumsq = 0.0;
    for (double x : d.samples()) {
        const double e = std::exp(-mu * x);
        sum += e;
        sumsq += e * e;
    }
    const double n = static_cast<double>(d.count());
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    const double se = (d.count() > 1) ? std::sqrt(var / (n - 1.0)) : 0.0;
    return {mean, se};
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

// Least squares on (log x, log y). Points with non-positive coordinates are
// rejected.
inline LineFit loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2)
        throw std::invalid_argument("loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("loglog_slope: coordinates must be positive");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double n = static_cast<double>(points.size());
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw std::invalid_argument("loglog_slope: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double sst = syy - sy * sy / n;
    const double ssr = fit.slope * (sxy - sx * sy / n);
    fit.r2 = (sst > 0.0) ? ssr / sst : 1.0;
    return fit;
}

} // namespace walkmax::stats

#endif
