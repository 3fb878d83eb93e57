#ifndef QPULSE_EFFECTIVE_HPP
#define QPULSE_EFFECTIVE_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpulse/model.hpp"

// RWA and first-order-corrected (RWA+) effective Hamiltonians for the
// rotating-frame dynamics, plus a brute-force stroboscopic comparison against
// the time-ordered propagator.

namespace qpulse {
namespace effective {

enum class RwaOrder { Rwa0, Rwa1 };

struct EffectiveParams {
    double detuning = 0.0;  // delta = omega_q - omega_lo
    double drive = 0.0;     // Omega_d * d
    double omega_lo = 1.0;
    RwaOrder order = RwaOrder::Rwa0;
};

// Coefficients of H = h_x sigma_x/2 + h_y sigma_y/2 + h_z sigma_z/2.
struct PauliCoeffs {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline PauliCoeffs h_eff(const EffectiveParams& p)
{
    PauliCoeffs h;
    h.z = -p.detuning;
    h.y = p.drive;
    if (p.order == RwaOrder::Rwa1) {
        // Bloch-Siegert term: rides on the detuning axis (it is a frequency
        // shift), as the first-order Magnus integral of the 2 omega_lo terms
        // shows; verified against the time-ordered oracle below.
        h.z -= 3.0 * p.drive * p.drive / (4.0 * p.omega_lo);
        h.y -= p.drive * p.detuning / (2.0 * p.omega_lo);
    }
    return h;
}

// Bloch-Siegert blue shift of the resonance, omega_q = 1 units.
inline double shifted_resonance(double drive_scale, double d)
{
    const double od = drive_scale * d;
    return 1.0 + 0.75 * od * od;
}

inline double corrected_rabi(double drive_scale, double d, double delta,
                             double omega_lo)
{
    return drive_scale * d * (1.0 - delta / (2.0 * omega_lo));
}

namespace detail {

using Mat2 = std::array<complexd, 4>; // row-major

inline Mat2 mul(const Mat2& a, const Mat2& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 pauli_matrix(const PauliCoeffs& h)
{
    const complexd i{0.0, 1.0};
    // (h_x sigma_x + h_y sigma_y + h_z sigma_z)/2
    return {0.5 * complexd{h.z, 0.0}, 0.5 * (complexd{h.x, 0.0} - i * h.y),
            0.5 * (complexd{h.x, 0.0} + i * h.y), -0.5 * complexd{h.z, 0.0}};
}

// exp(-i H t) for H = h.sigma/2, closed form.
inline Mat2 exp_pauli(const PauliCoeffs& h, double t)
{
    const double mag = std::sqrt(h.x * h.x + h.y * h.y + h.z * h.z);
    const double theta = 0.5 * mag * t;
    if (mag == 0.0) return {complexd{1.0}, complexd{0.0}, complexd{0.0}, complexd{1.0}};
    const double c = std::cos(theta);
    const double s = std::sin(theta) / mag;
    const complexd i{0.0, 1.0};
    Mat2 m = pauli_matrix(h);
    return {c - 2.0 * i * s * m[0], -2.0 * i * s * m[1], -2.0 * i * s * m[2],
            c - 2.0 * i * s * m[3]};
}

// Spectral norm of a 2x2 complex matrix.
inline double spectral_norm(const Mat2& m)
{
    // Eigenvalues of M^dag M.
    const double a = std::norm(m[0]) + std::norm(m[2]);
    const double d = std::norm(m[1]) + std::norm(m[3]);
    const complexd b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const double tr = a + d;
    const double det = a * d - std::norm(b);
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    return std::sqrt(std::max(0.0, 0.5 * tr + disc));
}

// Rotating-frame Hamiltonian for constant d: the RWA part plus the
// counter-rotating terms at 2 omega_lo.
inline PauliCoeffs h_bar(double drive, double delta, double omega_lo, double t)
{
    PauliCoeffs h;
    h.z = -delta;
    h.x = drive * std::sin(2.0 * omega_lo * t);
    h.y = drive * (1.0 - std::cos(2.0 * omega_lo * t));
    return h;
}

} // namespace detail

// Distance between the time-ordered rotating-frame propagator over N
// stroboscopic intervals tau and the effective-Hamiltonian prediction at the
// given order. The oracle uses fixed-step RK4 on the 2x2 propagator with
// steps_per_period steps per carrier period.
inline double stroboscopic_check(double drive, double delta, int n_periods,
                                 RwaOrder order,
                                 double tau = -1.0, double omega_lo = 1.0,
                                 int steps_per_period = 10000)
{
    if (n_periods < 1) throw std::invalid_argument("stroboscopic_check: N >= 1");
    if (tau <= 0.0) tau = 2.0 * std::numbers::pi / omega_lo;
    const double t_total = n_periods * tau;
    const double period = 2.0 * std::numbers::pi / omega_lo;
    const long n_steps = std::max<long>(
        1, std::lround(t_total / period * steps_per_period));
    const double h = t_total / static_cast<double>(n_steps);

    detail::Mat2 u{complexd{1.0}, complexd{0.0}, complexd{0.0}, complexd{1.0}};
    const complexd i{0.0, 1.0};
    auto rhs = [&](double t, const detail::Mat2& m) {
        detail::Mat2 hm =
            detail::mul(detail::pauli_matrix(detail::h_bar(drive, delta, omega_lo, t)), m);
        for (auto& v : hm) v *= -i;
        return hm;
    };
    for (long k = 0; k < n_steps; ++k) {
        const double t = k * h;
        const detail::Mat2 k1 = rhs(t, u);
        detail::Mat2 tmp;
        for (int j = 0; j < 4; ++j) tmp[j] = u[j] + 0.5 * h * k1[j];
        const detail::Mat2 k2 = rhs(t + 0.5 * h, tmp);
        for (int j = 0; j < 4; ++j) tmp[j] = u[j] + 0.5 * h * k2[j];
        const detail::Mat2 k3 = rhs(t + 0.5 * h, tmp);
        for (int j = 0; j < 4; ++j) tmp[j] = u[j] + h * k3[j];
        const detail::Mat2 k4 = rhs(t + h, tmp);
        for (int j = 0; j < 4; ++j) {
            u[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }

    EffectiveParams p{delta, drive, omega_lo, order};
    const detail::Mat2 ueff = detail::exp_pauli(h_eff(p), t_total);
    detail::Mat2 diff;
    for (int j = 0; j < 4; ++j) diff[j] = u[j] - ueff[j];
    return detail::spectral_norm(diff);
}

} // namespace effective
} // namespace qpulse

#endif
