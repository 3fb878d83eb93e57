// End-to-end acceptance checks against the published error tables and
// anchors. Prints one PASS/FAIL line per criterion and exits nonzero if any
// criterion fails.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "qpulse/effective.hpp"
#include "qpulse/experiments.hpp"
#include "qpulse/gates.hpp"

using namespace qpulse;
using calibration::Scheme;
using experiments::Config;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail)
{
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

bool within_factor(double value, double target, double factor)
{
    return value > target / factor && value < target * factor;
}

std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

const Config& cfg()
{
    static const Config c;
    return c;
}

double cell(double angle, Shape shape, Scheme scheme, double fraction,
            double c_eff = 1.0)
{
    return gates::gate_error(angle, shape, scheme, cfg().drive_scale(fraction),
                             c_eff, cfg().integrator());
}

double opt_cell(double angle, Shape shape, Scheme scheme, double fraction,
                double lo, double hi, double* c_out = nullptr)
{
    const GoldenResult r = gates::optimal_c_eff(
        angle, shape, scheme, cfg().drive_scale(fraction), lo, hi, cfg().integrator());
    if (c_out) *c_out = r.x;
    return r.value;
}

const double kPi = std::numbers::pi;
const double kHalfPi = 0.5 * std::numbers::pi;

// ---------------------------------------------------------------------------

std::map<double, double> g_sq_rwa, g_sq_corr_fp; // reused by criterion 6

void criterion1()
{
    const std::vector<Scheme> schemes{Scheme::Rwa, Scheme::RwaFullPeriods,
                                      Scheme::RwaCorr, Scheme::RwaCorrFullPeriods,
                                      Scheme::RwaEffCorrFullPeriods};
    bool ok = true;
    std::string detail;
    for (Scheme s : schemes) {
        for (double f : cfg().amp_fractions) {
            const double e = s == Scheme::RwaEffCorrFullPeriods
                                 ? opt_cell(kPi, Shape::Square, s, f, 0.9, 1.1)
                                 : cell(kPi, Shape::Square, s, f);
            if (!std::isfinite(e) || e < 0.0) ok = false;
            if (s == Scheme::Rwa) g_sq_rwa[f] = e;
            if (s == Scheme::RwaCorrFullPeriods) g_sq_corr_fp[f] = e;
        }
    }
    const double rwa01 = g_sq_rwa[0.1];
    const double corr_fp01 = g_sq_corr_fp[0.1];
    if (!within_factor(rwa01, 2.7e-3, 2.0)) ok = false;
    if (!within_factor(corr_fp01, 4.2e-5, 3.0)) ok = false;
    for (double f : cfg().amp_fractions) {
        if (!(g_sq_corr_fp[f] < g_sq_rwa[f] / 10.0)) ok = false;
    }
    report(1, ok,
           fmt("square pi: rwa@0.1 = %.3e (target 2.7e-3 x2), corr+fp@0.1 = %.3e "
               "(target 4.2e-5 x3), ladder >= 10x at all amplitudes",
               rwa01, corr_fp01));
}

void criterion2()
{
    const double rwa = cell(kPi, Shape::Gaussian, Scheme::Rwa, 0.1);
    const double fp = cell(kPi, Shape::Gaussian, Scheme::RwaFullPeriods, 0.1);
    const double zc = cell(kPi, Shape::Gaussian, Scheme::RwaTimeDepCorrZeroCross, 0.1);
    const double mean = cell(kPi, Shape::Gaussian, Scheme::RwaEffMeanCorr, 0.1);
    const double opt_fp = opt_cell(kPi, Shape::Gaussian,
                                   Scheme::RwaEffOptCorrFullPeriods, 0.1, 0.0, 1.0);
    bool ok = within_factor(rwa, 1.4e-3, 2.0) && within_factor(fp, 1.4e-3, 2.0) &&
              within_factor(zc, 1.4e-3, 2.0) && within_factor(mean, 5e-4, 2.0) &&
              opt_fp <= 3e-5;
    report(2, ok,
           fmt("gaussian pi @0.1: rwa = %.3e, fp = %.3e, zero-cross = %.3e "
               "(target 1.4e-3 x2); eff mean = %.3e (5e-4 x2); eff opt+fp = %.3e "
               "(<= 1e-5 x3)",
               rwa, fp, zc, mean, opt_fp));
}

void criterion3()
{
    bool ok = true;
    const double fp01 = cell(kHalfPi, Shape::Square, Scheme::RwaFullPeriods, 0.1);
    if (!within_factor(fp01, 6.5e-6, 3.0)) ok = false;
    double worst_ratio = 1e30;
    for (double f : cfg().amp_fractions) {
        const double rwa = cell(kHalfPi, Shape::Square, Scheme::Rwa, f);
        const double fp = cell(kHalfPi, Shape::Square, Scheme::RwaFullPeriods, f);
        worst_ratio = std::min(worst_ratio, rwa / fp);
    }
    if (worst_ratio < 50.0) ok = false;
    const double g_eff = opt_cell(kHalfPi, Shape::Gaussian,
                                  Scheme::RwaEffCorrFullPeriods, 0.2, -0.5, 0.5);
    if (!(g_eff <= 1e-6)) ok = false;
    report(3, ok,
           fmt("square pi/2: fp@0.1 = %.3e (target 6.5e-6 x3), min rwa/fp ratio "
               "%.1fx (>= 50); gaussian eff+fp@0.2 = %.3e (<= 1e-6)",
               fp01, worst_ratio, g_eff));
}

void criterion4()
{
    double c_sq = 0.0, c_gpi = 0.0, c_ghalf = 0.0;
    opt_cell(kPi, Shape::Square, Scheme::RwaEffCorrFullPeriods, 0.1, 0.9, 1.1, &c_sq);
    opt_cell(kPi, Shape::Gaussian, Scheme::RwaEffOptCorrFullPeriods, 0.1, 0.0, 1.0,
             &c_gpi);
    opt_cell(kHalfPi, Shape::Gaussian, Scheme::RwaEffCorrFullPeriods, 0.1, -0.5, 0.5,
             &c_ghalf);
    const bool ok_sq = std::abs(c_sq - 0.995) <= 0.1 * 0.995;
    const bool ok_gpi = std::abs(c_gpi - 0.2188) <= 0.1 * 0.2188;
    const bool ok_ghalf = std::abs(c_ghalf - (-0.084)) <= 0.1 * 0.084;
    report(4, ok_sq && ok_gpi && ok_ghalf,
           fmt("optimizer anchors: square pi c_eff = %.4f (0.995 +-10%%), gaussian "
               "pi c1 = %.4f (0.2188 +-10%%), gaussian pi/2 c1 = %.4f (-0.084 "
               "+-10%%)",
               c_sq, c_gpi, c_ghalf));
}

void criterion5()
{
    const IntegratorConfig ic = cfg().integrator();
    auto sweep = [&](Shape shape, Scheme scheme, double lo, double hi, double* d_pi,
                     double* d_min, double* d_max, double* d_mid, double* c0,
                     double* c_mid, double* c_end) {
        *d_min = 1.0;
        *d_max = 0.0;
        const auto grid = experiments::theta_grid(cfg().theta_points);
        const double drive = cfg().drive_scale(0.2);
        for (double theta : grid) {
            const GoldenResult r = gates::optimal_c_eff_state_prep(
                theta, shape, scheme, drive, lo, hi, ic);
            if (std::abs(theta - kPi) < 1e-12) {
                *d_pi = r.value;
                *c_end = r.x;
            } else {
                *d_min = std::min(*d_min, r.value);
                *d_max = std::max(*d_max, r.value);
            }
            if (theta == 0.0) *c0 = r.x;
            if (std::abs(theta - kHalfPi) < 1e-9) {
                *d_mid = r.value;
                *c_mid = r.x;
            }
        }
    };

    double sq_pi = 0, sq_min = 0, sq_max = 0, sq_mid = 0, sq_c0 = 0, sq_cm = 0,
           sq_ce = 0;
    sweep(Shape::Square, Scheme::RwaEffCorrFullPeriods, 0.0, 1.2, &sq_pi, &sq_min,
          &sq_max, &sq_mid, &sq_c0, &sq_cm, &sq_ce);
    double g_pi = 0, g_min = 0, g_max = 0, g_mid = 0, g_c0 = 0, g_cm = 0, g_ce = 0;
    sweep(Shape::Gaussian, Scheme::RwaEffOptCorrFullPeriods, -0.4, 0.8, &g_pi,
          &g_min, &g_max, &g_mid, &g_c0, &g_cm, &g_ce);

    bool ok = true;
    if (!(sq_min >= 5e-7 && sq_max <= 3e-6)) ok = false;
    if (!(sq_pi >= 1e-5 && sq_pi <= 3e-4)) ok = false;
    const double ratio = g_mid / sq_mid; // "approximately twice", factor 2
    if (!(ratio > 1.0 && ratio < 4.0)) ok = false;
    if (std::abs(sq_c0 - 0.996) > 0.15 * 0.996) ok = false;
    if (std::abs(sq_ce - 0.996) > 0.15 * 0.996) ok = false;
    if (std::abs(sq_cm - 0.332) > 0.15 * 0.332) ok = false;
    report(5, ok,
           fmt("state prep @0.2: square delta in [%.2e, %.2e] (target [5e-7, "
               "3e-6]), delta(pi) = %.2e ([1e-5, 3e-4]); gaussian/square at "
               "theta=pi/2 = %.2f (2x +-2x); c_eff profile %.3f / %.3f / %.3f "
               "(0.996 / 0.332 / 0.996 +-15%%)",
               sq_min, sq_max, sq_pi, ratio, sq_c0, sq_cm, sq_ce));
}

void criterion6()
{
    bool ok = true;
    // linear regime: halving Omega_d halves the RWA error (+-30%)
    for (auto [hi, lo] : {std::pair{0.2, 0.1}, {0.1, 0.05}}) {
        const double r = g_sq_rwa[hi] / g_sq_rwa[lo];
        if (!(r > 2.0 * 0.7 && r < 2.0 * 1.3)) ok = false;
    }
    // quadratic regime: halving Omega_d quarters the corrected error (+-40%)
    for (auto [hi, lo] : {std::pair{0.2, 0.1}, {0.1, 0.05}}) {
        const double r = g_sq_corr_fp[hi] / g_sq_corr_fp[lo];
        if (!(r > 4.0 * 0.6 && r < 4.0 * 1.4)) ok = false;
    }
    report(6, ok,
           fmt("scaling: rwa ratios %.2f / %.2f (2 +-30%%), corr+fp ratios %.2f / "
               "%.2f (4 +-40%%)",
               g_sq_rwa[0.2] / g_sq_rwa[0.1], g_sq_rwa[0.1] / g_sq_rwa[0.05],
               g_sq_corr_fp[0.2] / g_sq_corr_fp[0.1],
               g_sq_corr_fp[0.1] / g_sq_corr_fp[0.05]));
}

void criterion7()
{
    const IntegratorConfig ic = cfg().integrator();
    double worst_drift = 0.0;
    for (Shape shape : {Shape::Square, Shape::Gaussian}) {
        for (double f : cfg().amp_fractions) {
            const PulseSchedule sched = gates::build_y_gate(
                kPi, shape, Scheme::Rwa, cfg().drive_scale(f));
            const Trajectory traj = dynamics::propagate(sched, StateVector{}, ic);
            worst_drift = std::max(worst_drift, traj.max_norm_drift);
        }
    }
    // order check on a short pulse where truncation dominates roundoff
    PulseSchedule sched;
    DriveSegment seg;
    seg.envelope = Envelope{Shape::Square, 20.0 * kPi, 0.0};
    seg.carrier = CarrierSpec::constant(1.0);
    seg.drive_scale = 0.05;
    sched.entries.push_back(seg);
    IntegratorConfig coarse;
    coarse.step = 2.0 * kPi / 210.0;
    IntegratorConfig fine = coarse;
    fine.step = 0.5 * coarse.step;
    const double ratio = dynamics::verify_step(sched, StateVector{}, coarse) /
                         dynamics::verify_step(sched, StateVector{}, fine);
    const bool ok = worst_drift <= 1e-7 && ratio >= 12.0 && ratio <= 20.0;
    report(7, ok,
           fmt("integrator: worst norm drift %.2e (<= 1e-7), step-halving ratio "
               "%.1fx (in [12, 20])",
               worst_drift, ratio));
}

void criterion8()
{
    const double drive = cfg().drive_scale(0.1);
    const double r0 =
        effective::stroboscopic_check(drive, 0.0, 100, effective::RwaOrder::Rwa0);
    const double r1 =
        effective::stroboscopic_check(drive, 0.0, 100, effective::RwaOrder::Rwa1);
    const double r1_double = effective::stroboscopic_check(
        2.0 * drive, 0.0, 100, effective::RwaOrder::Rwa1);
    const double scale = r1_double / r1;
    const bool ok = r0 / r1 >= 5.0 && scale > 8.0 * 0.6 && scale < 8.0 * 1.4;
    report(8, ok,
           fmt("magnus: rwa0/rwa1 residual ratio %.1fx (>= 5), amplitude-doubling "
               "scale %.2fx (8 +-40%%)",
               r0 / r1, scale));
}

void criterion9()
{
    const IntegratorConfig ic = cfg().integrator();
    const double drive = cfg().drive_scale(0.1);
    const Trajectory f1 = dynamics::propagate(
        gates::build_y_gate(kPi, Shape::Square, Scheme::Rwa, drive), StateVector{},
        ic);
    const BlochState b1 = bloch_of(f1.final_state);
    const Trajectory f2 = dynamics::propagate(
        gates::build_y_gate(kHalfPi, Shape::Square, Scheme::Rwa, drive),
        StateVector{}, ic);
    const BlochState b2 = bloch_of(f2.final_state);
    const bool ok = std::abs(f1.final_time - 953.0) <= 0.005 * 953.0 &&
                    b1.r_z <= -0.999 && std::abs(b2.r_z) <= 5e-3 &&
                    b2.c_xy() >= 0.999;
    report(9, ok,
           fmt("figures: fig1 ends t = %.2f (953 +-0.5%%) r_z = %.5f (<= -0.999); "
               "fig2 |r_z| = %.2e (<= 5e-3) c_xy = %.5f (>= 0.999)",
               f1.final_time, b1.r_z, std::abs(b2.r_z), b2.c_xy()));
}

} // namespace

int main()
{
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
