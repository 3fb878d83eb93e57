#ifndef QPULSE_EXPERIMENTS_HPP
#define QPULSE_EXPERIMENTS_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpulse/gates.hpp"
#include "qpulse/model.hpp"

// Batch experiment runner: reproduces the coherent-error tables, the example
// trajectories, and the state-preparation sweep as deterministic CSV files.

namespace qpulse {
namespace experiments {

using calibration::Scheme;

// IBMQ-Manila qubit-0 backend constants (angular frequencies, rad/s).
inline constexpr double kManilaOmegaQ = 29806862687.393623;
inline constexpr double kManilaOmegaDMax = 982583670.175613;

struct Bracket {
    double lo = 0.0;
    double hi = 1.0;
};

struct Config {
    double omega_q_raw = kManilaOmegaQ;
    double omega_d_max_raw = kManilaOmegaDMax;
    std::vector<double> amp_fractions{0.2, 0.1, 0.05};
    double step_divisor = 600.0; // h = 2 pi / step_divisor
    int theta_points = 33;
    Bracket square_bracket{0.9, 1.1};        // square pi eff corrections
    Bracket gauss_pi_bracket{0.0, 1.0};      // gaussian pi eff opt corrections
    Bracket gauss_half_bracket{-0.5, 0.5};   // gaussian pi/2 eff corrections
    Bracket sweep_square_bracket{0.0, 1.2};  // state-prep c_eff(theta), square
    Bracket sweep_gauss_bracket{-0.4, 0.8};  // state-prep c_eff(theta), gaussian
    std::string out_dir = "./results";
    bool check_step = false; // run verify_step on each calibrated schedule

    IntegratorConfig integrator() const
    {
        IntegratorConfig cfg;
        cfg.step = 2.0 * std::numbers::pi / step_divisor;
        return cfg;
    }

    double drive_scale(double fraction) const
    {
        return nondimensionalize(omega_q_raw, omega_d_max_raw, fraction)
            .drive_scale();
    }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

// Key-value configuration file; CLI flags override these values.
inline Config load_config_file(const std::string& path)
{
    Config cfg;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: expected key = value, got: " + line);
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "omega_q") cfg.omega_q_raw = std::stod(value);
        else if (key == "omega_d_max") cfg.omega_d_max_raw = std::stod(value);
        else if (key == "step_divisor") cfg.step_divisor = std::stod(value);
        else if (key == "theta_points") cfg.theta_points = std::stoi(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "amp_fractions") {
            cfg.amp_fractions.clear();
            for (const auto& v : detail::split(value, ',')) {
                cfg.amp_fractions.push_back(std::stod(detail::trim(v)));
            }
        } else if (key == "square_bracket") {
            const auto v = detail::split(value, ',');
            if (v.size() != 2) throw std::runtime_error("config: bracket needs lo,hi");
            cfg.square_bracket = {std::stod(v[0]), std::stod(v[1])};
        } else if (key == "gauss_pi_bracket") {
            const auto v = detail::split(value, ',');
            if (v.size() != 2) throw std::runtime_error("config: bracket needs lo,hi");
            cfg.gauss_pi_bracket = {std::stod(v[0]), std::stod(v[1])};
        } else if (key == "gauss_half_bracket") {
            const auto v = detail::split(value, ',');
            if (v.size() != 2) throw std::runtime_error("config: bracket needs lo,hi");
            cfg.gauss_half_bracket = {std::stod(v[0]), std::stod(v[1])};
        } else {
            throw std::runtime_error("config: unknown key: " + key);
        }
    }
    return cfg;
}

struct Row {
    std::string table;
    std::string shape;
    std::string scheme;
    double amp_fraction = 0.0;
    std::string metric;
    double value = 0.0;
    double duration = 0.0;
    double width = 0.0;
    double c_eff = 0.0;
    int n_periods = 0;
};

inline std::string csv_header()
{
    return "table,shape,scheme,amp_fraction,metric,value,duration,width,c_eff,"
           "n_periods";
}

inline std::string format_row(const Row& r)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%.2f,%s,%.5e,%.5e,%.5e,%.5e,%d",
                  r.table.c_str(), r.shape.c_str(), r.scheme.c_str(),
                  r.amp_fraction, r.metric.c_str(), r.value, r.duration, r.width,
                  r.c_eff, r.n_periods);
    return buf;
}

namespace detail {

inline void sort_rows(std::vector<Row>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.shape != b.shape) return a.shape < b.shape;
        if (a.scheme != b.scheme) return a.scheme < b.scheme;
        return a.amp_fraction > b.amp_fraction;
    });
}

inline void write_rows(const std::string& path, std::vector<Row> rows)
{
    sort_rows(rows);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << csv_header() << "\n";
    for (const auto& r : rows) out << format_row(r) << "\n";
}

// Golden-section bracket for schemes whose carrier shift scaling is
// optimized, or no bracket for fixed schemes.
inline bool needs_opt(Scheme s)
{
    return calibration::uses_opt_c(s);
}

inline Bracket bracket_for(const Config& cfg, double angle, Shape shape)
{
    if (shape == Shape::Square) return cfg.square_bracket;
    if (std::abs(angle - std::numbers::pi) < 1e-9) return cfg.gauss_pi_bracket;
    return cfg.gauss_half_bracket;
}

} // namespace detail

// One fully calibrated table cell: optimizes c_eff where the scheme calls for
// it, then measures the gate's coherent error.
inline Row table_cell(const std::string& table, double angle, Shape shape,
                      Scheme scheme, double fraction, const Config& cfg)
{
    const double drive = cfg.drive_scale(fraction);
    const IntegratorConfig icfg = cfg.integrator();
    double c_eff = 1.0;
    if (detail::needs_opt(scheme)) {
        const Bracket br = detail::bracket_for(cfg, angle, shape);
        c_eff = gates::optimal_c_eff(angle, shape, scheme, drive, br.lo, br.hi,
                                     icfg)
                    .x;
    }
    const calibration::CalibratedPulse pulse =
        calibration::calibrate(angle, shape, scheme, drive, c_eff);
    PulseSchedule schedule;
    schedule.entries.push_back(gates::to_segment(pulse));
    if (cfg.check_step) {
        // 5e-9 per 1000 tau_q: the longest pulses sit on the double-precision
        // roundoff floor, which grows with the integrated time span.
        const double bound =
            5e-9 * std::max(1.0, pulse.envelope.duration / 1000.0);
        const double dev = dynamics::verify_step(schedule, StateVector{}, icfg);
        if (dev > bound) {
            throw std::runtime_error("table_cell: step-halving deviation " +
                                     std::to_string(dev) + " above bound " +
                                     std::to_string(bound));
        }
    }
    const Trajectory traj = dynamics::propagate(schedule, StateVector{}, icfg);
    Row row;
    row.table = table;
    row.shape = shape_name(shape);
    row.scheme = calibration::scheme_name(scheme);
    row.amp_fraction = fraction;
    row.metric = std::abs(angle - std::numbers::pi) < 1e-9 ? "c_xy" : "r_z";
    row.value = gates::coherent_error(bloch_of(traj.final_state), angle);
    row.duration = pulse.envelope.duration;
    row.width = pulse.envelope.sigma;
    row.c_eff = pulse.c_eff_used;
    row.n_periods = pulse.n_periods;
    return row;
}

inline const std::vector<Scheme>& ypi_square_schemes()
{
    static const std::vector<Scheme> v{
        Scheme::Rwa, Scheme::RwaFullPeriods, Scheme::RwaCorr,
        Scheme::RwaCorrFullPeriods, Scheme::RwaEffCorrFullPeriods};
    return v;
}

inline const std::vector<Scheme>& ypi_gaussian_schemes()
{
    static const std::vector<Scheme> v{
        Scheme::Rwa,
        Scheme::RwaFullPeriods,
        Scheme::RwaTimeDepCorrZeroCross,
        Scheme::RwaEffMeanCorr,
        Scheme::RwaEffOptCorr,
        Scheme::RwaEffOptCorrFullPeriods};
    return v;
}

inline const std::vector<Scheme>& ypihalf_square_schemes()
{
    return ypi_square_schemes();
}

inline const std::vector<Scheme>& ypihalf_gaussian_schemes()
{
    static const std::vector<Scheme> v{Scheme::Rwa, Scheme::RwaFullPeriods,
                                       Scheme::RwaEffCorrFullPeriods};
    return v;
}

inline std::vector<double> theta_grid(int points)
{
    if (points < 2) throw std::invalid_argument("theta_grid: need >= 2 points");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = std::numbers::pi * static_cast<double>(i) /
                  static_cast<double>(points - 1);
    }
    return grid;
}

inline Scheme state_prep_scheme(Shape shape)
{
    return shape == Shape::Square ? Scheme::RwaEffCorrFullPeriods
                                  : Scheme::RwaEffOptCorrFullPeriods;
}

inline Bracket state_prep_bracket(const Config& cfg, Shape shape)
{
    return shape == Shape::Square ? cfg.sweep_square_bracket
                                  : cfg.sweep_gauss_bracket;
}

// Rows of the Y_pi / Y_pi/2 tables, or state-preparation delta ranges.
inline std::vector<Row> run_table(
    const std::string& table_id, const Config& cfg,
    const std::vector<Shape>& shapes_filter = {},
    const std::vector<Scheme>& schemes_filter = {})
{
    std::vector<Row> rows;
    auto want_shape = [&](Shape s) {
        return shapes_filter.empty() ||
               std::find(shapes_filter.begin(), shapes_filter.end(), s) !=
                   shapes_filter.end();
    };
    auto want_scheme = [&](Scheme s) {
        return schemes_filter.empty() ||
               std::find(schemes_filter.begin(), schemes_filter.end(), s) !=
                   schemes_filter.end();
    };

    if (table_id == "ypi" || table_id == "ypihalf") {
        const double angle = table_id == "ypi" ? std::numbers::pi
                                               : 0.5 * std::numbers::pi;
        struct Block {
            Shape shape;
            const std::vector<Scheme>* schemes;
        };
        const std::vector<Block> blocks =
            table_id == "ypi"
                ? std::vector<Block>{{Shape::Square, &ypi_square_schemes()},
                                     {Shape::Gaussian, &ypi_gaussian_schemes()}}
                : std::vector<Block>{{Shape::Square, &ypihalf_square_schemes()},
                                     {Shape::Gaussian, &ypihalf_gaussian_schemes()}};
        for (const auto& block : blocks) {
            if (!want_shape(block.shape)) continue;
            for (Scheme scheme : *block.schemes) {
                if (!want_scheme(scheme)) continue;
                for (double fraction : cfg.amp_fractions) {
                    rows.push_back(table_cell(table_id, angle, block.shape, scheme,
                                              fraction, cfg));
                }
            }
        }
    } else if (table_id == "stateprep") {
        const std::vector<Shape> shapes{Shape::Square, Shape::Gaussian,
                                        Shape::ShiftedGaussian};
        const IntegratorConfig icfg = cfg.integrator();
        for (Shape shape : shapes) {
            if (!want_shape(shape)) continue;
            const Scheme scheme = state_prep_scheme(shape);
            if (!want_scheme(scheme)) continue;
            const Bracket br = state_prep_bracket(cfg, shape);
            for (double fraction : cfg.amp_fractions) {
                const double drive = cfg.drive_scale(fraction);
                double d_min = 1.0, d_max = 0.0, d_pi = 0.0;
                for (double theta : theta_grid(cfg.theta_points)) {
                    const GoldenResult r = gates::optimal_c_eff_state_prep(
                        theta, shape, scheme, drive, br.lo, br.hi, icfg);
                    if (std::abs(theta - std::numbers::pi) < 1e-12) {
                        d_pi = r.value;
                    } else {
                        d_min = std::min(d_min, r.value);
                        d_max = std::max(d_max, r.value);
                    }
                }
                Row base;
                base.table = "stateprep";
                base.shape = shape_name(shape);
                base.scheme = calibration::scheme_name(scheme);
                base.amp_fraction = fraction;
                Row r1 = base;
                r1.metric = "delta_min";
                r1.value = d_min;
                Row r2 = base;
                r2.metric = "delta_max";
                r2.value = d_max;
                Row r3 = base;
                r3.metric = "delta_theta_pi";
                r3.value = d_pi;
                rows.push_back(r1);
                rows.push_back(r2);
                rows.push_back(r3);
            }
        }
    } else {
        throw std::invalid_argument("run_table: unknown table id: " + table_id +
                                    " (valid: ypi, ypihalf, stateprep)");
    }
    return rows;
}

inline void write_table(const std::string& table_id, const Config& cfg,
                        const std::vector<Shape>& shapes_filter = {},
                        const std::vector<Scheme>& schemes_filter = {})
{
    std::filesystem::create_directories(cfg.out_dir);
    detail::write_rows(cfg.out_dir + "/" + table_id + ".csv",
                       run_table(table_id, cfg, shapes_filter, schemes_filter));
}

// Trajectory dump for the example square pulses at amp fraction 0.1. The last
// column repeats the drive amplitude scaled by 100 for plotting next to the
// Bloch components.
inline void run_figure(const std::string& figure_id, const Config& cfg)
{
    double angle = 0.0;
    if (figure_id == "fig1") angle = std::numbers::pi;
    else if (figure_id == "fig2") angle = 0.5 * std::numbers::pi;
    else {
        throw std::invalid_argument("run_figure: unknown figure id: " + figure_id +
                                    " (valid: fig1, fig2)");
    }
    const double drive = cfg.drive_scale(0.1);
    const PulseSchedule schedule =
        gates::build_y_gate(angle, Shape::Square, Scheme::Rwa, drive);
    IntegratorConfig icfg = cfg.integrator();
    const long n_steps =
        std::lround(schedule.duration() / icfg.step);
    icfg.sample_stride = std::max(1L, n_steps / 2000);
    const Trajectory traj = dynamics::propagate(schedule, StateVector{}, icfg);

    std::filesystem::create_directories(cfg.out_dir);
    const std::string path = cfg.out_dir + "/" + figure_id + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,r_x,r_y,r_z,c_xy,drive_amplitude,drive_scaled\n";
    char buf[256];
    for (const auto& s : traj.samples) {
        std::snprintf(buf, sizeof(buf),
                      "%.5e,%.5e,%.5e,%.5e,%.5e,%.5e,%.5e\n", s.t, s.bloch.r_x,
                      s.bloch.r_y, s.bloch.r_z, s.bloch.c_xy(), s.drive,
                      100.0 * s.drive);
        out << buf;
    }
}

struct SweepPoint {
    Shape shape;
    double amp_fraction = 0.0;
    double theta = 0.0;
    double c_xy = 0.0;
    double r_z = 0.0;
    double delta = 0.0;
    double c_eff = 0.0;
};

// Per-theta state-preparation errors with the per-angle optimized carrier
// shift. Also records the c_eff(theta) profile.
inline std::vector<SweepPoint> run_sweep(const std::vector<Shape>& shapes,
                                         const Config& cfg)
{
    if (cfg.theta_points < 2) {
        throw std::invalid_argument("run_sweep: need a theta grid of >= 2 points");
    }
    if (shapes.empty()) {
        throw std::invalid_argument("run_sweep: need at least one shape");
    }
    const IntegratorConfig icfg = cfg.integrator();
    std::vector<SweepPoint> points;
    for (Shape shape : shapes) {
        const Scheme scheme = state_prep_scheme(shape);
        const Bracket br = state_prep_bracket(cfg, shape);
        for (double fraction : cfg.amp_fractions) {
            const double drive = cfg.drive_scale(fraction);
            for (double theta : theta_grid(cfg.theta_points)) {
                const GoldenResult opt = gates::optimal_c_eff_state_prep(
                    theta, shape, scheme, drive, br.lo, br.hi, icfg);
                const gates::StatePrepResult r =
                    gates::state_prep(theta, shape, scheme, drive, opt.x, icfg);
                points.push_back(
                    {shape, fraction, theta, r.c_xy, r.r_z, r.delta, opt.x});
            }
        }
    }
    return points;
}

inline void write_sweep(const std::vector<Shape>& shapes, const Config& cfg)
{
    const auto points = run_sweep(shapes, cfg);
    std::filesystem::create_directories(cfg.out_dir);
    {
        std::ofstream out(cfg.out_dir + "/sweep.csv");
        out << "shape,amp_fraction,theta,c_xy,r_z,delta,c_eff\n";
        char buf[256];
        for (const auto& p : points) {
            std::snprintf(buf, sizeof(buf), "%s,%.2f,%.5e,%.5e,%.5e,%.5e,%.5e\n",
                          shape_name(p.shape), p.amp_fraction, p.theta, p.c_xy,
                          p.r_z, p.delta, p.c_eff);
            out << buf;
        }
    }
    {
        std::ofstream out(cfg.out_dir + "/ceff_profile.csv");
        out << "shape,amp_fraction,theta,c_eff\n";
        char buf[128];
        for (const auto& p : points) {
            std::snprintf(buf, sizeof(buf), "%s,%.2f,%.5e,%.5e\n",
                          shape_name(p.shape), p.amp_fraction, p.theta, p.c_eff);
            out << buf;
        }
    }
    // Summary: delta range per (shape, amplitude) for comparison against the
    // state-preparation table.
    for (Shape shape : shapes) {
        for (double fraction : cfg.amp_fractions) {
            double d_min = 1.0, d_max = 0.0;
            for (const auto& p : points) {
                if (p.shape != shape || p.amp_fraction != fraction) continue;
                d_min = std::min(d_min, p.delta);
                d_max = std::max(d_max, p.delta);
            }
            std::printf("sweep %s amp %.2f: delta in [%.3e, %.3e]\n",
                        shape_name(shape), fraction, d_min, d_max);
        }
    }
}

} // namespace experiments
} // namespace qpulse

#endif
