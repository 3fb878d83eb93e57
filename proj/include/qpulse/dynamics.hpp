#ifndef QPULSE_DYNAMICS_HPP
#define QPULSE_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qpulse/envelopes.hpp"
#include "qpulse/model.hpp"
#include "qpulse/quadrature.hpp"

// Lab-frame propagation of the driven two-level Schrodinger equation
//   i d/dt psi = [ -sigma_z/2 + Omega_d d(t) sin(phi(t)) sigma_x ] psi
// (omega_q = 1 units) under a PulseSchedule. This is the ground-truth oracle
// for every error table; everything else in the library is an approximation
// checked against it.

namespace qpulse {

struct IntegratorConfig {
    double step = 2.0 * std::numbers::pi / 600.0; // base RK4 step, tau_q
    int sample_stride = 0;                        // 0: keep only the final state
};

struct TrajectorySample {
    double t = 0.0;
    BlochState bloch;
    double drive = 0.0; // Omega_d d(t)
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    StateVector final_state;
    double final_time = 0.0;
    double max_norm_drift = 0.0; // max |<psi|psi> - 1| over all samples
};

namespace dynamics {

// Instantaneous carrier angular frequency.
inline double carrier_omega(const CarrierSpec& carrier, const Envelope& env,
                            double drive_scale, double t)
{
    if (carrier.mode == CarrierSpec::Mode::Constant) return carrier.omega_lo;
    const double od = drive_scale * envelopes::eval(env, t);
    return 1.0 + carrier.c_eff * 0.75 * od * od;
}

// Accumulated carrier phase at local time t of a segment, including phi_lo.
// Chirped mode integrates the instantaneous frequency with the same adaptive
// quadrature used for pulse areas.
inline double carrier_phase(const CarrierSpec& carrier, const Envelope& env,
                            double drive_scale, double t)
{
    if (carrier.mode == CarrierSpec::Mode::Constant) {
        return carrier.omega_lo * t + carrier.phi_lo;
    }
    const double phase = integrate(
        [&](double u) { return carrier_omega(carrier, env, drive_scale, u); }, 0.0, t,
        1e-12 * std::max(t, 1.0));
    return phase + carrier.phi_lo;
}

namespace detail {

// Augmented real state: (Re a0, Im a0, Re a1, Im a1, carrier phase).
struct OdeState {
    double v[5];
};

struct SegmentContext {
    const DriveSegment* seg;
    double phase_offset; // phi_lo + accumulated virtual-Z shifts
};

inline void deriv(const SegmentContext& c, double t_local, const OdeState& y,
                  OdeState& dy)
{
    // Stage times of the segment's last step can land one ulp past the
    // envelope edge, where eval drops to zero; clamp to stay on the envelope.
    t_local = std::clamp(t_local, 0.0, c.seg->envelope.duration);
    const double d = envelopes::eval(c.seg->envelope, t_local);
    const double drive =
        c.seg->drive_scale * d * std::sin(y.v[4] + c.phase_offset);
    // i psi' = H psi with H = -sigma_z/2 + drive * sigma_x
    const double re0 = y.v[0], im0 = y.v[1], re1 = y.v[2], im1 = y.v[3];
    // psi0' = -i(-0.5 psi0 + drive psi1)
    dy.v[0] = -(-0.5 * im0 + drive * im1);
    dy.v[1] = (-0.5 * re0 + drive * re1);
    dy.v[2] = -(drive * im0 + 0.5 * im1);
    dy.v[3] = (drive * re0 + 0.5 * re1);
    dy.v[4] = carrier_omega(c.seg->carrier, c.seg->envelope, c.seg->drive_scale,
                            t_local);
}

inline void rk4_step(const SegmentContext& c, double t, double h, OdeState& y)
{
    OdeState k1, k2, k3, k4, tmp;
    deriv(c, t, y, k1);
    for (int i = 0; i < 5; ++i) tmp.v[i] = y.v[i] + 0.5 * h * k1.v[i];
    deriv(c, t + 0.5 * h, tmp, k2);
    for (int i = 0; i < 5; ++i) tmp.v[i] = y.v[i] + 0.5 * h * k2.v[i];
    deriv(c, t + 0.5 * h, tmp, k3);
    for (int i = 0; i < 5; ++i) tmp.v[i] = y.v[i] + h * k3.v[i];
    deriv(c, t + h, tmp, k4);
    for (int i = 0; i < 5; ++i) {
        y.v[i] += (h / 6.0) * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
    }
}

} // namespace detail

inline Trajectory propagate(const PulseSchedule& schedule, const StateVector& psi0,
                            const IntegratorConfig& cfg)
{
    if (std::abs(psi0.norm_sq() - 1.0) > 1e-6) {
        throw std::invalid_argument("propagate: psi0 not normalized");
    }
    if (!(cfg.step > 0.0)) {
        throw std::invalid_argument("propagate: step must be positive");
    }

    Trajectory traj;
    detail::OdeState y{{psi0.a0.real(), psi0.a0.imag(), psi0.a1.real(),
                        psi0.a1.imag(), 0.0}};
    double t_global = 0.0;
    double z_shift = 0.0; // accumulated virtual-Z carrier phase offset
    long step_count = 0;

    auto record = [&](double t, double drive) {
        StateVector psi{{y.v[0], y.v[1]}, {y.v[2], y.v[3]}};
        const double drift = std::abs(psi.norm_sq() - 1.0);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (drift > 1e-6) {
            std::ostringstream msg;
            msg << "propagate: norm drift " << drift << " at t = " << t
                << " exceeds 1e-6; reduce the integration step (h = " << cfg.step
                << ")";
            throw std::runtime_error(msg.str());
        }
        if (cfg.sample_stride > 0) {
            traj.samples.push_back({t, bloch_of(psi), drive});
        }
    };

    record(0.0, 0.0);

    for (const auto& entry : schedule.entries) {
        if (const auto* vz = std::get_if<VirtualZ>(&entry)) {
            z_shift += vz->phase;
            continue;
        }
        const auto& seg = std::get<DriveSegment>(entry);
        const double T = seg.envelope.duration;
        const long n = std::max<long>(1, std::lround(T / cfg.step));
        const double h = T / static_cast<double>(n);

        // Require at least ~200 steps per carrier period.
        const double omega_ref =
            seg.carrier.mode == CarrierSpec::Mode::Constant ? seg.carrier.omega_lo
                                                            : 1.0;
        if (h > 2.0 * std::numbers::pi / (200.0 * omega_ref)) {
            throw std::invalid_argument(
                "propagate: step too coarse for the carrier period");
        }

        // Carrier phase (y.v[4]) continues across segments.
        detail::SegmentContext ctx{&seg, seg.carrier.phi_lo + z_shift};
        for (long i = 0; i < n; ++i) {
            const double t_local = static_cast<double>(i) * h;
            detail::rk4_step(ctx, t_local, h, y);
            ++step_count;
            const bool last = (i + 1 == n);
            if ((cfg.sample_stride > 0 && step_count % cfg.sample_stride == 0) ||
                last) {
                const double tl = static_cast<double>(i + 1) * h;
                const double drive =
                    seg.drive_scale * envelopes::eval(seg.envelope, tl);
                record(t_global + tl, drive);
            }
        }
        t_global += T;
    }

    traj.final_state = StateVector{{y.v[0], y.v[1]}, {y.v[2], y.v[3]}};
    traj.final_time = t_global;
    if (cfg.sample_stride > 0 && !traj.samples.empty()) {
        traj.samples.back().t = t_global;
    }
    return traj;
}

// Step-halving accuracy estimate: max component deviation of the final state
// between runs at h and h/2.
inline double verify_step(const PulseSchedule& schedule, const StateVector& psi0,
                          const IntegratorConfig& cfg)
{
    IntegratorConfig coarse = cfg;
    coarse.sample_stride = 0;
    IntegratorConfig fine = coarse;
    fine.step = 0.5 * cfg.step;
    const StateVector a = propagate(schedule, psi0, coarse).final_state;
    const StateVector b = propagate(schedule, psi0, fine).final_state;
    double dev = 0.0;
    dev = std::max(dev, std::abs(a.a0.real() - b.a0.real()));
    dev = std::max(dev, std::abs(a.a0.imag() - b.a0.imag()));
    dev = std::max(dev, std::abs(a.a1.real() - b.a1.real()));
    dev = std::max(dev, std::abs(a.a1.imag() - b.a1.imag()));
    return dev;
}

} // namespace dynamics
} // namespace qpulse

#endif
