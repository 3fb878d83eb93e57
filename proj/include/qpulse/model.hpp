#ifndef QPULSE_MODEL_HPP
#define QPULSE_MODEL_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

// Core value types shared by every other header. All internal quantities are
// nondimensionalized to omega_q = 1; times are in units of 1/omega_q.

namespace qpulse {

using complexd = std::complex<double>;

struct QubitParams {
    double omega_q = 1.0;      // always 1 after nondimensionalization
    double omega_d_max = 0.0;  // max drive scale, units of omega_q
    double amp_fraction = 1.0; // in (0, 1]

    double drive_scale() const { return amp_fraction * omega_d_max; }
};

// Raw-unit frequencies enter here and nowhere else.
inline QubitParams nondimensionalize(double omega_q_raw, double omega_d_max_raw,
                                     double amp_fraction)
{
    if (!(omega_q_raw > 0.0) || !(omega_d_max_raw > 0.0)) {
        throw std::invalid_argument("nondimensionalize: frequencies must be positive");
    }
    if (!(amp_fraction > 0.0) || amp_fraction > 1.0) {
        throw std::invalid_argument("nondimensionalize: amp_fraction must be in (0, 1]");
    }
    QubitParams p;
    p.omega_q = 1.0;
    p.omega_d_max = omega_d_max_raw / omega_q_raw;
    p.amp_fraction = amp_fraction;
    return p;
}

enum class Shape { Square, Gaussian, ShiftedGaussian };

inline const char* shape_name(Shape s)
{
    switch (s) {
    case Shape::Square: return "square";
    case Shape::Gaussian: return "gaussian";
    case Shape::ShiftedGaussian: return "shifted_gaussian";
    }
    return "?";
}

struct Envelope {
    Shape shape = Shape::Square;
    double duration = 0.0; // T
    double sigma = 0.0;    // ignored for Square
};

inline void validate(const Envelope& env)
{
    if (!(env.duration > 0.0)) {
        throw std::invalid_argument("Envelope: duration must be positive");
    }
    if (env.shape != Shape::Square) {
        if (!(env.sigma > 0.0)) {
            throw std::invalid_argument("Envelope: sigma must be positive");
        }
        if (env.duration < 4.0 * env.sigma) {
            throw std::invalid_argument("Envelope: duration must be >= 4 sigma");
        }
    }
}

// Carrier frequency program. Constant mode drives at a fixed omega_lo;
// Chirped mode tracks the envelope-dependent shifted resonance
//   omega(t) = omega_q * (1 + c_eff * 0.75 * (Omega_d d(t))^2 / omega_q^2).
struct CarrierSpec {
    enum class Mode { Constant, Chirped };
    Mode mode = Mode::Constant;
    double omega_lo = 1.0; // Constant mode
    double c_eff = 1.0;    // Chirped mode
    double phi_lo = 0.0;

    static CarrierSpec constant(double omega, double phi = 0.0)
    {
        return CarrierSpec{Mode::Constant, omega, 1.0, phi};
    }
    static CarrierSpec chirped(double c, double phi = 0.0)
    {
        return CarrierSpec{Mode::Chirped, 1.0, c, phi};
    }
};

struct DriveSegment {
    Envelope envelope;
    CarrierSpec carrier;
    double drive_scale = 0.0; // Omega_d
};

// Z-rotation as a phase offset on all subsequent carriers; consumes no time.
struct VirtualZ {
    double phase = 0.0;
};

using ScheduleEntry = std::variant<DriveSegment, VirtualZ>;

struct PulseSchedule {
    std::vector<ScheduleEntry> entries;

    double duration() const
    {
        double t = 0.0;
        for (const auto& e : entries) {
            if (const auto* seg = std::get_if<DriveSegment>(&e)) {
                t += seg->envelope.duration;
            }
        }
        return t;
    }
};

struct StateVector {
    complexd a0{1.0, 0.0};
    complexd a1{0.0, 0.0};

    double norm_sq() const { return std::norm(a0) + std::norm(a1); }
};

struct BlochState {
    double r_x = 0.0;
    double r_y = 0.0;
    double r_z = 0.0;

    double c_xy() const { return std::hypot(r_x, r_y); }
    double length() const { return std::sqrt(r_x * r_x + r_y * r_y + r_z * r_z); }
};

inline BlochState bloch_of(const StateVector& psi)
{
    if (!std::isfinite(psi.a0.real()) || !std::isfinite(psi.a0.imag()) ||
        !std::isfinite(psi.a1.real()) || !std::isfinite(psi.a1.imag())) {
        throw std::invalid_argument("bloch_of: non-finite amplitudes");
    }
    const complexd cross = std::conj(psi.a0) * psi.a1;
    BlochState b;
    b.r_x = 2.0 * cross.real();
    b.r_y = 2.0 * cross.imag();
    b.r_z = std::norm(psi.a0) - std::norm(psi.a1);
    return b;
}

} // namespace qpulse

#endif
