#ifndef WALKMAX_TESTS_ORACLES_HPP
#define WALKMAX_TESTS_ORACLES_HPP

// Independent reference computations for the test suites. Nothing here calls
// into the library's moment/solver code paths: integration is a self-contained
// Romberg rule, sampling is inverse-transform, root finding is plain scanning.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

// Romberg integration on [a,b]; enough for smooth reference integrands.
inline double romberg(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int max_level = 22) {
    std::vector<std::vector<double>> r(1);
    double h = b - a;
    r[0].push_back(0.5 * h * (f(a) + f(b)));
    for (int k = 1; k <= max_level; ++k) {
        h *= 0.5;
        double sum = 0.0;
        const std::int64_t steps = 1LL << (k - 1);
        for (std::int64_t i = 1; i <= steps; ++i)
            sum += f(a + (2.0 * i - 1.0) * h);
        r.emplace_back();
        r[k].push_back(0.5 * r[k - 1][0] + h * sum);
        for (int j = 1; j <= k; ++j) {
            const double num = r[k][j - 1] - r[k - 1][j - 1];
            r[k].push_back(r[k][j - 1] + num / (std::pow(4.0, j) - 1.0));
        }
        if (k > 3 && std::fabs(r[k][k] - r[k - 1][k - 1]) < tol) return r[k][k];
    }
    return r[max_level][max_level];
}

// Piecewise Romberg for integrands with a known kink.
inline double romberg_split(const std::function<double(double)>& f, double a,
                            double split, double b, double tol = 1e-12) {
    if (split <= a || split >= b) return romberg(f, a, b, tol);
    return romberg(f, a, split, tol) + romberg(f, split, b, tol);
}

// Last u on a fine geometric grid with V(u)/u^2 > 1/n, refined by local scan.
inline double scan_c_of_n(const std::function<double(double)>& V, double n,
                          double u_lo, double u_hi) {
    const double level = 1.0 / n;
    double last = -1.0;
    const int steps = 200000;
    const double r = std::pow(u_hi / u_lo, 1.0 / steps);
    double u = u_lo;
    for (int i = 0; i <= steps; ++i, u *= r)
        if (V(u) / (u * u) > level) last = u;
    if (last < 0.0) throw std::runtime_error("scan_c_of_n: no positive region");
    return last;
}

// Reference samplers driven by std::mt19937_64 (unrelated to the library rng).
struct RefRng {
    std::mt19937_64 eng;
    explicit RefRng(std::uint64_t seed) : eng(seed) {}
    double uniform() {
        return std::uniform_real_distribution<double>(1e-16, 1.0 - 1e-16)(eng);
    }
    double exponential(double rate) { return -std::log(uniform()) / rate; }
    double pareto(double alpha, double xm) {
        return xm * std::pow(uniform(), -1.0 / alpha);
    }
    double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
};

// Exact law of max_{0<=k<=K}(S_k - k a) for a Rademacher walk by full
// enumeration of all 2^K sign paths. Returns atom-weighted support points.
struct EnumeratedMax {
    std::vector<double> values; // distinct maxima, ascending
    std::vector<double> probs;
};

inline EnumeratedMax enumerate_rademacher_max(int K, double a) {
    if (K < 1 || K > 20) throw std::runtime_error("enumeration horizon out of range");
    std::vector<std::pair<double, double>> mass; // (max, prob)
    const std::uint64_t paths = 1ULL << K;
    const double p = 1.0 / static_cast<double>(paths);
    for (std::uint64_t bits = 0; bits < paths; ++bits) {
        double s = 0.0, mx = 0.0;
        for (int k = 1; k <= K; ++k) {
            s += ((bits >> (k - 1)) & 1 ? 1.0 : -1.0) - a;
            if (s > mx) mx = s;
        }
        mass.emplace_back(mx, p);
    }
    std::sort(mass.begin(), mass.end());
    EnumeratedMax out;
    for (const auto& [v, q] : mass) {
        if (!out.values.empty() && std::fabs(v - out.values.back()) < 1e-12)
            out.probs.back() += q;
        else {
            out.values.push_back(v);
            out.probs.push_back(q);
        }
    }
    return out;
}

inline double enumerated_cdf(const EnumeratedMax& law, double x) {
    double f = 0.0;
    for (std::size_t i = 0; i < law.values.size(); ++i)
        if (law.values[i] <= x + 1e-12) f += law.probs[i];
    return f;
}

} // namespace oracle

#endif
