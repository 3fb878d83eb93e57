#ifndef QPULSE_CALIBRATION_HPP
#define QPULSE_CALIBRATION_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qpulse/dynamics.hpp"
#include "qpulse/envelopes.hpp"
#include "qpulse/golden.hpp"
#include "qpulse/model.hpp"

// Solves for pulse parameters (duration, width, amplitude rescale, chirp
// factor, carrier frequency) under each correction scheme of the calibration
// ladder.

namespace qpulse {
namespace calibration {

enum class Scheme {
    Rwa,
    RwaFullPeriods,
    RwaCorr,
    RwaCorrFullPeriods,
    RwaEffCorrFullPeriods,
    RwaTimeDepCorrZeroCross,
    RwaEffMeanCorr,
    RwaEffOptCorr,
    RwaEffOptCorrFullPeriods,
};

inline const char* scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::Rwa: return "rwa";
    case Scheme::RwaFullPeriods: return "rwa_full_periods";
    case Scheme::RwaCorr: return "rwa_corr";
    case Scheme::RwaCorrFullPeriods: return "rwa_corr_full_periods";
    case Scheme::RwaEffCorrFullPeriods: return "rwa_eff_corr_full_periods";
    case Scheme::RwaTimeDepCorrZeroCross: return "rwa_tdep_corr_zero_cross";
    case Scheme::RwaEffMeanCorr: return "rwa_eff_mean_corr";
    case Scheme::RwaEffOptCorr: return "rwa_eff_opt_corr";
    case Scheme::RwaEffOptCorrFullPeriods: return "rwa_eff_opt_corr_full_periods";
    }
    return "?";
}

inline const std::vector<Scheme>& all_schemes()
{
    static const std::vector<Scheme> v{
        Scheme::Rwa,
        Scheme::RwaFullPeriods,
        Scheme::RwaCorr,
        Scheme::RwaCorrFullPeriods,
        Scheme::RwaEffCorrFullPeriods,
        Scheme::RwaTimeDepCorrZeroCross,
        Scheme::RwaEffMeanCorr,
        Scheme::RwaEffOptCorr,
        Scheme::RwaEffOptCorrFullPeriods,
    };
    return v;
}

inline std::optional<Scheme> parse_scheme(std::string_view name)
{
    for (Scheme s : all_schemes()) {
        if (name == scheme_name(s)) return s;
    }
    return std::nullopt;
}

// Area condition: plain (integral of Omega_d d = angle) or with the
// first-order Rabi correction. For the Gaussian family the eff-correction
// schemes keep the plain condition: the constant carrier shift already
// absorbs the time-dependent correction, mirroring how the time-independent
// mean-frequency pulse definition is set up.
inline bool uses_corrected_area(Scheme s, Shape shape = Shape::Square)
{
    if (s == Scheme::RwaCorr || s == Scheme::RwaCorrFullPeriods ||
        s == Scheme::RwaTimeDepCorrZeroCross) {
        return true;
    }
    return s == Scheme::RwaEffCorrFullPeriods && shape == Shape::Square;
}

inline bool uses_full_periods(Scheme s)
{
    return s == Scheme::RwaFullPeriods || s == Scheme::RwaCorrFullPeriods ||
           s == Scheme::RwaEffCorrFullPeriods ||
           s == Scheme::RwaEffOptCorrFullPeriods;
}

inline bool uses_chirp(Scheme s) { return s == Scheme::RwaTimeDepCorrZeroCross; }

// Schemes whose carrier shift is scaled by an externally chosen c_eff.
inline bool uses_opt_c(Scheme s)
{
    return s == Scheme::RwaEffCorrFullPeriods || s == Scheme::RwaEffOptCorr ||
           s == Scheme::RwaEffOptCorrFullPeriods;
}

struct CalibratedPulse {
    Envelope envelope;
    CarrierSpec carrier;
    double drive_scale = 0.0;
    int n_periods = 0;     // 0 when no full-period alignment was applied
    double c_eff_used = 0.0; // scaling of the Bloch-Siegert carrier shift
};

inline double area_condition_residual(const Envelope& env, double drive_scale,
                                      double angle, Scheme scheme)
{
    if (uses_corrected_area(scheme, env.shape)) {
        return envelopes::corrected_area(env, drive_scale) - angle;
    }
    return drive_scale * envelopes::area(env) - angle;
}

// Duration of a square pulse accumulating the target angle. Corrected schemes
// shorten the pulse by the first-order Rabi increase.
inline double square_duration(double angle, double drive_scale, Scheme scheme)
{
    if (!(drive_scale > 0.0)) {
        throw std::invalid_argument("square_duration: drive scale must be positive");
    }
    if (!(angle > 0.0)) {
        throw std::invalid_argument("square_duration: angle must be positive");
    }
    const double t0 = angle / drive_scale;
    if (!uses_corrected_area(scheme)) return t0;
    return t0 * (1.0 - 0.375 * drive_scale * drive_scale);
}

namespace detail {

// Bisection for a monotone residual; returns the root.
template <class F>
double bisect(const F& residual, double lo, double hi, double x_tol,
              double f_tol, const char* what)
{
    double flo = residual(lo);
    double fhi = residual(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        throw std::runtime_error(std::string("calibration: no bracket for ") + what);
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual(mid);
        if (std::abs(fm) < f_tol || hi - lo < x_tol) return mid;
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Amplitude solving the scheme's area condition on a fixed-duration square
// pulse.
inline double square_amplitude_for(double angle, double duration, Scheme scheme)
{
    double omega = angle / duration;
    if (!uses_corrected_area(scheme)) return omega;
    for (int i = 0; i < 8; ++i) { // Newton; cubic is nearly linear here
        const double f = omega * duration * (1.0 + 0.375 * omega * omega) - angle;
        const double df = duration * (1.0 + 1.125 * omega * omega);
        omega -= f / df;
    }
    return omega;
}

// Duration solving the corrected area condition exactly (the first-order
// formula in square_duration is accurate only to O(Omega^4)).
inline double square_duration_exact(double angle, double drive_scale, Scheme scheme)
{
    if (!uses_corrected_area(scheme)) return angle / drive_scale;
    return angle / (drive_scale * (1.0 + 0.375 * drive_scale * drive_scale));
}

} // namespace detail

// Width-then-duration fit for the Gaussian family: the width is fixed 1%
// above the infinite-duration value and the duration solves the scheme's
// area condition.
inline Envelope gaussian_fit(double angle, double drive_scale, Scheme scheme,
                             Shape shape)
{
    if (shape == Shape::Square) {
        throw std::invalid_argument("gaussian_fit: Gaussian-family shapes only");
    }
    if (!(angle > 0.0)) {
        throw std::invalid_argument("gaussian_fit: angle must be positive");
    }
    if (!(drive_scale > 0.0)) {
        throw std::invalid_argument("gaussian_fit: drive scale must be positive");
    }
    const double sigma =
        1.01 * angle / (drive_scale * std::sqrt(2.0 * std::numbers::pi));
    auto residual = [&](double T) {
        Envelope env{shape, T, sigma};
        return area_condition_residual(env, drive_scale, angle, scheme);
    };
    const double T = detail::bisect(residual, 4.0 * sigma, 10.0 * sigma,
                                    1e-13 * sigma, 1e-11, "gaussian duration");
    return Envelope{shape, T, sigma};
}

// Re-solve the width at a fixed duration (used after period alignment).
inline double solve_width(double angle, double drive_scale, Scheme scheme,
                          Shape shape, double duration, double sigma_guess)
{
    auto residual = [&](double s) {
        Envelope env{shape, duration, s};
        return area_condition_residual(env, drive_scale, angle, scheme);
    };
    return detail::bisect(residual, 0.5 * sigma_guess,
                          std::min(2.0 * sigma_guess, duration / 4.0),
                          1e-13 * sigma_guess, 1e-11, "gaussian width");
}

// Time-independent carrier using the mean-square envelope fraction in place
// of the instantaneous Bloch-Siegert shift.
inline double mean_chirp_to_constant(const Envelope& env, double drive_scale)
{
    return 1.0 +
           0.75 * drive_scale * drive_scale * envelopes::mean_square_fraction(env);
}

namespace detail {

inline double carrier_c_scale(Scheme scheme, double c_eff, const Envelope& env)
{
    switch (scheme) {
    case Scheme::Rwa:
    case Scheme::RwaFullPeriods:
        return 0.0;
    case Scheme::RwaCorr:
    case Scheme::RwaCorrFullPeriods:
    case Scheme::RwaTimeDepCorrZeroCross:
        return 1.0;
    case Scheme::RwaEffMeanCorr:
        return envelopes::mean_square_fraction(env);
    case Scheme::RwaEffCorrFullPeriods:
    case Scheme::RwaEffOptCorr:
    case Scheme::RwaEffOptCorrFullPeriods:
        return c_eff;
    }
    return 0.0;
}

inline double constant_carrier_omega(double drive_scale, double c_scale)
{
    return 1.0 + c_scale * 0.75 * drive_scale * drive_scale;
}

} // namespace detail

// Snap the duration to the nearest integer number of qubit periods (the
// 2 pi / omega_q clock the virtual-Z frame is defined against) and restore
// the area condition: square pulses rescale the amplitude, Gaussian pulses
// re-solve the width at the new fixed duration. Carrier shifts are O(Omega^2)
// so the grid stays at omega_q regardless of the scheme's carrier.
inline CalibratedPulse align_full_periods(CalibratedPulse pulse, double angle,
                                          Scheme scheme)
{
    if (pulse.carrier.mode != CarrierSpec::Mode::Constant) {
        throw std::invalid_argument("align_full_periods: constant carrier required");
    }
    const double two_pi = 2.0 * std::numbers::pi; // one period of omega_q = 1
    const int n = static_cast<int>(std::lround(pulse.envelope.duration / two_pi));
    if (n < 1) {
        throw std::invalid_argument("align_full_periods: pulse shorter than one period");
    }
    const double t_new = n * two_pi;
    if (pulse.envelope.shape == Shape::Square) {
        pulse.drive_scale = detail::square_amplitude_for(angle, t_new, scheme);
        // The Bloch-Siegert shift follows the rescaled amplitude.
        pulse.carrier.omega_lo =
            detail::constant_carrier_omega(pulse.drive_scale, pulse.c_eff_used);
    } else {
        pulse.envelope.sigma = solve_width(angle, pulse.drive_scale, scheme,
                                           pulse.envelope.shape, t_new,
                                           pulse.envelope.sigma);
    }
    pulse.envelope.duration = t_new;
    pulse.n_periods = n;
    return pulse;
}

// Chirped carriers have no fixed period; instead the accumulated carrier
// phase at the pulse end is snapped to a multiple of 2 pi (a negative-to-
// positive zero crossing of the sine), then the width is re-solved.
inline CalibratedPulse align_zero_crossing(CalibratedPulse pulse, double angle,
                                           Scheme scheme)
{
    if (pulse.carrier.mode != CarrierSpec::Mode::Chirped) {
        throw std::invalid_argument("align_zero_crossing: chirped carrier required");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < 4; ++i) {
        const double phase =
            dynamics::carrier_phase(pulse.carrier, pulse.envelope,
                                    pulse.drive_scale, pulse.envelope.duration) -
            pulse.carrier.phi_lo;
        const long k = std::lround(phase / two_pi);
        const double excess = phase - k * two_pi;
        if (std::abs(excess) < 1e-12) break;
        const double omega_end =
            dynamics::carrier_omega(pulse.carrier, pulse.envelope,
                                    pulse.drive_scale, pulse.envelope.duration);
        const double t_new = pulse.envelope.duration - excess / omega_end;
        pulse.envelope.sigma = solve_width(angle, pulse.drive_scale, scheme,
                                           pulse.envelope.shape, t_new,
                                           pulse.envelope.sigma);
        pulse.envelope.duration = t_new;
    }
    pulse.n_periods = static_cast<int>(std::lround(
        (dynamics::carrier_phase(pulse.carrier, pulse.envelope, pulse.drive_scale,
                                 pulse.envelope.duration) -
         pulse.carrier.phi_lo) /
        two_pi));
    return pulse;
}

// Full calibration for one (angle, shape, scheme, amplitude) cell. c_eff is
// only consulted by the eff-correction schemes.
inline CalibratedPulse calibrate(double angle, Shape shape, Scheme scheme,
                                 double drive_scale, double c_eff = 1.0)
{
    if (shape == Shape::Square && uses_chirp(scheme)) {
        throw std::invalid_argument(
            "calibrate: chirped schemes require a Gaussian-family shape");
    }
    CalibratedPulse pulse;
    pulse.drive_scale = drive_scale;

    if (shape == Shape::Square) {
        pulse.envelope = Envelope{Shape::Square,
                                  detail::square_duration_exact(angle, drive_scale, scheme),
                                  0.0};
    } else {
        pulse.envelope = gaussian_fit(angle, drive_scale, scheme, shape);
    }

    const double c_scale = detail::carrier_c_scale(scheme, c_eff, pulse.envelope);
    pulse.c_eff_used = c_scale;
    if (uses_chirp(scheme)) {
        pulse.carrier = CarrierSpec::chirped(c_scale);
    } else {
        pulse.carrier = CarrierSpec::constant(
            detail::constant_carrier_omega(drive_scale, c_scale));
    }

    if (uses_full_periods(scheme)) {
        pulse = align_full_periods(pulse, angle, scheme);
    } else if (uses_chirp(scheme)) {
        pulse = align_zero_crossing(pulse, angle, scheme);
    }
    return pulse;
}

} // namespace calibration
} // namespace qpulse

#endif
