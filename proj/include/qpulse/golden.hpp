#ifndef QPULSE_GOLDEN_HPP
#define QPULSE_GOLDEN_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace qpulse {

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    bool bracket_warning = false; // objective not unimodal in the bracket
    int evaluations = 0;
};

// Golden-section minimization of a scalar objective on [a, b] to the given
// bracket width. Each interior evaluation is reused, so the cost is one
// objective call per iteration (objectives here are full simulations).
inline GoldenResult golden_min(const std::function<double(double)>& f, double a,
                               double b, double x_tol)
{
    if (!(b > a)) throw std::invalid_argument("golden_min: need b > a");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    GoldenResult res;
    const double fa = f(a);
    const double fb = f(b);
    res.evaluations = 2;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    res.evaluations += 2;
    double lo = a, hi = b;
    while (hi - lo > x_tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
        ++res.evaluations;
    }
    res.x = 0.5 * (lo + hi);
    res.value = std::min(fc, fd);
    // An endpoint beating every interior sample means the minimum sits at (or
    // beyond) the bracket edge.
    const double f_end = std::min(fa, fb);
    if (f_end < res.value) {
        res.bracket_warning = true;
        res.x = fa < fb ? a : b;
        res.value = f_end;
    }
    return res;
}

} // namespace qpulse

#endif
