#ifndef QPULSE_QUADRATURE_HPP
#define QPULSE_QUADRATURE_HPP

#include <cmath>

namespace qpulse {

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const double right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature with absolute tolerance. Starts from a two-panel
// split so a symmetric integrand cannot fool the first error estimate.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol)
{
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double flm = f(0.5 * (a + m));
    const double frm = f(0.5 * (m + b));
    const double left = ((m - a) / 6.0) * (fa + 4.0 * flm + fm);
    const double right = ((b - m) / 6.0) * (fm + 4.0 * frm + fb);
    return detail::adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, 48) +
           detail::adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, 48);
}

} // namespace qpulse

#endif
