// Command-line driver for the pulse-calibration experiments: writes the
// coherent-error tables, example trajectories, and the state-preparation
// sweep as CSV files.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpulse/experiments.hpp"

namespace {

std::vector<qpulse::Shape> parse_shapes(const std::vector<std::string>& names)
{
    std::vector<qpulse::Shape> shapes;
    for (const auto& n : names) {
        if (n == "square") shapes.push_back(qpulse::Shape::Square);
        else if (n == "gaussian") shapes.push_back(qpulse::Shape::Gaussian);
        else if (n == "shifted_gaussian") {
            shapes.push_back(qpulse::Shape::ShiftedGaussian);
        } else {
            throw CLI::ValidationError("--shapes", "unknown shape: " + n);
        }
    }
    return shapes;
}

std::vector<qpulse::calibration::Scheme> parse_schemes(
    const std::vector<std::string>& names)
{
    std::vector<qpulse::calibration::Scheme> schemes;
    for (const auto& n : names) {
        const auto s = qpulse::calibration::parse_scheme(n);
        if (!s) throw CLI::ValidationError("--schemes", "unknown scheme: " + n);
        schemes.push_back(*s);
    }
    return schemes;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Single-qubit pulse calibration experiments"};

    std::string table, figure, config_path, out_dir;
    std::vector<std::string> shape_names, scheme_names;
    std::vector<double> amp_fractions;
    bool sweep = false;
    bool verify_step = false;

    app.add_option("--table", table,
                   "Write an error table (ypi, ypihalf, stateprep)");
    app.add_option("--figure", figure, "Write a trajectory CSV (fig1, fig2)");
    app.add_flag("--sweep", sweep,
                 "Write the per-theta state-preparation sweep");
    app.add_option("--shapes", shape_names,
                   "Restrict to shapes (square, gaussian, shifted_gaussian)")
        ->delimiter(',');
    app.add_option("--schemes", scheme_names, "Restrict to calibration schemes")
        ->delimiter(',');
    app.add_option("--amp-fractions", amp_fractions,
                   "Drive amplitude fractions (default 0.2,0.1,0.05)")
        ->delimiter(',');
    app.add_option("--out", out_dir, "Output directory (default ./results)");
    app.add_option("--config", config_path, "Key-value configuration file");
    app.add_flag("--verify-step", verify_step,
                 "Check integrator accuracy on every table cell");

    CLI11_PARSE(app, argc, argv);

    try {
        qpulse::experiments::Config cfg;
        if (!config_path.empty()) {
            cfg = qpulse::experiments::load_config_file(config_path);
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!amp_fractions.empty()) cfg.amp_fractions = amp_fractions;
        cfg.check_step = verify_step;

        const auto shapes = parse_shapes(shape_names);
        const auto schemes = parse_schemes(scheme_names);

        bool did_anything = false;
        if (!table.empty()) {
            qpulse::experiments::write_table(table, cfg, shapes, schemes);
            std::printf("wrote %s/%s.csv\n", cfg.out_dir.c_str(), table.c_str());
            did_anything = true;
        }
        if (!figure.empty()) {
            qpulse::experiments::run_figure(figure, cfg);
            std::printf("wrote %s/%s.csv\n", cfg.out_dir.c_str(), figure.c_str());
            did_anything = true;
        }
        if (sweep) {
            auto sweep_shapes = shapes;
            if (sweep_shapes.empty()) {
                sweep_shapes = {qpulse::Shape::Square, qpulse::Shape::Gaussian};
            }
            qpulse::experiments::write_sweep(sweep_shapes, cfg);
            std::printf("wrote %s/sweep.csv and %s/ceff_profile.csv\n",
                        cfg.out_dir.c_str(), cfg.out_dir.c_str());
            did_anything = true;
        }
        if (!did_anything) {
            std::fprintf(stderr, "nothing to do: pass --table, --figure, or --sweep\n");
            return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
