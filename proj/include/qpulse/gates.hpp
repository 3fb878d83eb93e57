#ifndef QPULSE_GATES_HPP
#define QPULSE_GATES_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qpulse/calibration.hpp"
#include "qpulse/dynamics.hpp"
#include "qpulse/golden.hpp"
#include "qpulse/model.hpp"

// Y-rotation and state-preparation schedules plus the coherent-error metrics
// evaluated on final states.

namespace qpulse {
namespace gates {

using calibration::CalibratedPulse;
using calibration::Scheme;

inline DriveSegment to_segment(const CalibratedPulse& pulse)
{
    return DriveSegment{pulse.envelope, pulse.carrier, pulse.drive_scale};
}

// Single Y_angle pulse. phi_lo = 0 makes the RWA drive term +sigma_y.
inline PulseSchedule build_y_gate(double angle, Shape shape, Scheme scheme,
                                  double drive_scale, double c_eff = 1.0)
{
    const CalibratedPulse pulse =
        calibration::calibrate(angle, shape, scheme, drive_scale, c_eff);
    PulseSchedule schedule;
    schedule.entries.push_back(to_segment(pulse));
    return schedule;
}

// Y_pi targets the south pole: the residual coherence c_xy is the error.
// Y_pi/2 targets the equator: the residual population |r_z| is the error.
inline double coherent_error(const BlochState& final_state, double angle)
{
    if (std::abs(angle - std::numbers::pi) < 1e-9) return final_state.c_xy();
    if (std::abs(angle - 0.5 * std::numbers::pi) < 1e-9) {
        return std::abs(final_state.r_z);
    }
    throw std::invalid_argument("coherent_error: gate must be Y_pi or Y_pi/2");
}

inline double gate_error(double angle, Shape shape, Scheme scheme,
                         double drive_scale, double c_eff,
                         const IntegratorConfig& cfg)
{
    const PulseSchedule schedule =
        build_y_gate(angle, shape, scheme, drive_scale, c_eff);
    const Trajectory traj = dynamics::propagate(schedule, StateVector{}, cfg);
    return coherent_error(bloch_of(traj.final_state), angle);
}

// Y_pi/2 Z_(pi-theta) Y_pi/2 prepares cos(theta/2)|0> + .. up to a phase;
// the second pulse reuses the first pulse's calibration, only the carrier
// phase differs by the virtual-Z offset.
inline PulseSchedule build_state_prep(double theta, Shape shape, Scheme scheme,
                                      double drive_scale, double c_eff = 1.0)
{
    if (theta < 0.0 || theta > std::numbers::pi + 1e-12) {
        throw std::invalid_argument("build_state_prep: theta must be in [0, pi]");
    }
    const CalibratedPulse pulse = calibration::calibrate(
        0.5 * std::numbers::pi, shape, scheme, drive_scale, c_eff);
    PulseSchedule schedule;
    schedule.entries.push_back(to_segment(pulse));
    schedule.entries.push_back(VirtualZ{std::numbers::pi - theta});
    schedule.entries.push_back(to_segment(pulse));
    return schedule;
}

struct StatePrepResult {
    double c_xy = 0.0;
    double r_z = 0.0;
    double delta = 0.0; // distance to the ideal (sin theta, cos theta) target
};

inline StatePrepResult state_prep(double theta, Shape shape, Scheme scheme,
                                  double drive_scale, double c_eff,
                                  const IntegratorConfig& cfg)
{
    const PulseSchedule schedule =
        build_state_prep(theta, shape, scheme, drive_scale, c_eff);
    const Trajectory traj = dynamics::propagate(schedule, StateVector{}, cfg);
    const BlochState b = bloch_of(traj.final_state);
    StatePrepResult res;
    res.c_xy = b.c_xy();
    res.r_z = b.r_z;
    const double dc = res.c_xy - std::sin(theta);
    const double dz = res.r_z - std::cos(theta);
    res.delta = std::sqrt(dc * dc + dz * dz);
    return res;
}

// Golden-section search for the carrier-shift scaling minimizing the gate's
// coherent error; one full propagation per candidate.
inline GoldenResult optimal_c_eff(double angle, Shape shape, Scheme scheme,
                                  double drive_scale, double bracket_lo,
                                  double bracket_hi, const IntegratorConfig& cfg,
                                  double x_tol = 1e-4)
{
    return golden_min(
        [&](double c) {
            return gate_error(angle, shape, scheme, drive_scale, c, cfg);
        },
        bracket_lo, bracket_hi, x_tol);
}

inline GoldenResult optimal_c_eff_state_prep(double theta, Shape shape,
                                             Scheme scheme, double drive_scale,
                                             double bracket_lo, double bracket_hi,
                                             const IntegratorConfig& cfg,
                                             double x_tol = 1e-4)
{
    return golden_min(
        [&](double c) {
            return state_prep(theta, shape, scheme, drive_scale, c, cfg).delta;
        },
        bracket_lo, bracket_hi, x_tol);
}

struct CEffProfilePoint {
    double theta = 0.0;
    double c_eff = 0.0;
    double delta = 0.0;
};

inline std::vector<CEffProfilePoint> c_eff_profile(
    const std::vector<double>& thetas, Shape shape, Scheme scheme,
    double drive_scale, double bracket_lo, double bracket_hi,
    const IntegratorConfig& cfg)
{
    std::vector<CEffProfilePoint> profile;
    profile.reserve(thetas.size());
    for (double theta : thetas) {
        const GoldenResult r = optimal_c_eff_state_prep(
            theta, shape, scheme, drive_scale, bracket_lo, bracket_hi, cfg);
        profile.push_back({theta, r.x, r.value});
    }
    return profile;
}

} // namespace gates
} // namespace qpulse

#endif
