#ifndef QPULSE_ENVELOPES_HPP
#define QPULSE_ENVELOPES_HPP

#include <cmath>

#include "qpulse/model.hpp"
#include "qpulse/quadrature.hpp"

// Pulse envelope evaluation and the integral functionals every calibration
// condition is built from.

namespace qpulse {
namespace envelopes {

// Dimensionless amplitude in [0, 1]; zero outside [0, T] so integrators can
// sample freely across segment boundaries.
inline double eval(const Envelope& env, double t)
{
    if (t < 0.0 || t > env.duration) return 0.0;
    switch (env.shape) {
    case Shape::Square:
        return 1.0;
    case Shape::Gaussian: {
        const double u = (t - 0.5 * env.duration) / env.sigma;
        return std::exp(-0.5 * u * u);
    }
    case Shape::ShiftedGaussian: {
        const double u = (t - 0.5 * env.duration) / env.sigma;
        const double u0 = 0.5 * env.duration / env.sigma;
        const double g0 = std::exp(-0.5 * u0 * u0);
        return (std::exp(-0.5 * u * u) - g0) / (1.0 - g0);
    }
    }
    return 0.0;
}

inline double quad_tol(const Envelope& env) { return 1e-12 * env.duration; }

// integral of d(t) over [0, T]
inline double area(const Envelope& env)
{
    if (env.shape == Shape::Square) return env.duration;
    return integrate([&](double t) { return eval(env, t); }, 0.0, env.duration,
                     quad_tol(env));
}

// Pulse area including the first-order Rabi-frequency correction:
//   integral of Omega_d d(t) (1 + 3 (Omega_d d(t))^2 / 8)  (omega_q = 1 units).
inline double corrected_area(const Envelope& env, double drive_scale)
{
    auto f = [&](double t) {
        const double od = drive_scale * eval(env, t);
        return od * (1.0 + 0.375 * od * od);
    };
    if (env.shape == Shape::Square) {
        return env.duration * drive_scale * (1.0 + 0.375 * drive_scale * drive_scale);
    }
    return integrate(f, 0.0, env.duration, quad_tol(env));
}

// c1 = (1/T) integral of d^2(t)
inline double mean_square_fraction(const Envelope& env)
{
    if (env.shape == Shape::Square) return 1.0;
    const double i2 = integrate(
        [&](double t) {
            const double d = eval(env, t);
            return d * d;
        },
        0.0, env.duration, quad_tol(env));
    return i2 / env.duration;
}

} // namespace envelopes
} // namespace qpulse

#endif
