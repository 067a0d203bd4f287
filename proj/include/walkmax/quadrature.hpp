#ifndef WALKMAX_QUADRATURE_HPP
#define WALKMAX_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <string>

#include "walkmax/errors.hpp"

namespace walkmax::quad {

namespace detail {

inline double adaptive(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double fm, double whole,
                       double tol, int depth, const std::string& what) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
    const double right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
    const double diff = left + right - whole;
    if (std::fabs(diff) <= 15.0 * tol || (b - a) < 1e-300)
        return left + right + diff / 15.0;
    if (depth <= 0)
        throw NumericError("quadrature failed to converge: " + what);
    return adaptive(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1, what) +
           adaptive(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1, what);
}

} // namespace detail

// Adaptive Simpson on [a,b] with an absolute tolerance.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double abs_tol = 1e-10,
                        const std::string& what = "integrand") {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    return detail::adaptive(f, a, fa, b, fb, fm, whole, abs_tol, 48, what);
}

// Integral over [a, inf) for integrands with eventual power-law or faster
// decay. Doubles the log-spaced upper cut until the marginal piece is below
// tolerance.
inline double integrate_to_infinity(const std::function<double(double)>& f,
                                    double a, double abs_tol = 1e-10,
                                    const std::string& what = "integrand") {
    const double base = (a > 0.0) ? a : 1.0;
    double hi = base * 4.0;
    double total = integrate(f, a, hi, abs_tol * 0.5, what);
    for (int i = 0; i < 200; ++i) {
        const double next = hi * 4.0;
        const double piece = integrate(f, hi, next, abs_tol * 0.25, what);
        total += piece;
        hi = next;
        if (std::fabs(piece) < abs_tol * 0.25) return total;
    }
    throw NumericError("tail integral did not settle: " + what);
}

} // namespace walkmax::quad

#endif
