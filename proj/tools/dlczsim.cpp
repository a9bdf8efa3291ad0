// Command-line front end: simulate, sweep, fit, geometry, ramsey.
// Flag > config file > built-in default.
// Exit codes: 0 success, 2 validation, 3 runtime, 4 IO.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dlcz/config.hpp"
#include "dlcz/io.hpp"
#include "dlcz/raman.hpp"
#include "dlcz/sweep.hpp"

namespace {

constexpr double deg = std::numbers::pi / 180.0;

struct Overrides {
    std::string config_path;
    double theta_deg = 0.0;
    double temperature_uk = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_atoms = 0;
    std::size_t n_trials = 0;
    std::size_t probe_points = 0;
    double probe_max_us = 0.0;
    double gradient = 0.0;
    int threads = -1;
    std::string convention;
    bool freezing = false;
    bool no_freezing = false;
    bool magnetic = false;
    bool no_expansion = false;
    bool gravity = false;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("-c,--config", ov.config_path, "JSON config file");
    cmd->add_option("--theta", ov.theta_deg, "detection angle theta_s, degrees");
    cmd->add_option("--temperature", ov.temperature_uk, "cloud temperature, uK");
    cmd->add_option("--seed", ov.seed, "master RNG seed");
    cmd->add_option("--atoms", ov.n_atoms, "atoms per trial");
    cmd->add_option("--trials", ov.n_trials, "Monte Carlo trials");
    cmd->add_option("--probe-points", ov.probe_points, "probe times per curve");
    cmd->add_option("--probe-max", ov.probe_max_us, "last probe time, us");
    cmd->add_option("--gradient", ov.gradient, "magnetic gradient, MHz/m");
    cmd->add_option("--threads", ov.threads, "worker threads (0 = auto)");
    cmd->add_option("--speed-convention", ov.convention, "rms_1d or paper_1d");
    cmd->add_flag("--freezing", ov.freezing, "enable the freezing pulse pair");
    cmd->add_flag("--no-freezing", ov.no_freezing, "disable freezing");
    cmd->add_flag("--magnetic", ov.magnetic, "enable magnetic dephasing model");
    cmd->add_flag("--no-expansion", ov.no_expansion, "disable mode weighting");
    cmd->add_flag("--gravity", ov.gravity, "enable free fall");
}

dlcz::ExperimentConfig resolve(const CLI::App* cmd, const Overrides& ov) {
    dlcz::ExperimentConfig c = ov.config_path.empty()
                                   ? dlcz::ExperimentConfig{}
                                   : dlcz::load_config(ov.config_path);
    const auto given = [cmd](const char* name) { return cmd->count(name) > 0; };
    if (given("--theta")) c.theta_s_deg = ov.theta_deg;
    if (given("--temperature")) c.temperature_uk = ov.temperature_uk;
    if (given("--seed")) c.master_seed = ov.seed;
    if (given("--atoms")) c.n_atoms = ov.n_atoms;
    if (given("--trials")) c.n_trials = ov.n_trials;
    if (given("--probe-points")) c.probe_points = ov.probe_points;
    if (given("--probe-max")) c.probe_max_us = ov.probe_max_us;
    if (given("--gradient")) {
        c.gradient_mhz_per_m = ov.gradient;
        c.magnetic_model = ov.gradient > 0.0;
    }
    if (given("--threads")) c.threads = ov.threads;
    if (given("--speed-convention")) c.speed_convention = ov.convention;
    if (ov.freezing) c.freezing = true;
    if (ov.no_freezing) c.freezing = false;
    if (ov.magnetic) c.magnetic_model = true;
    if (ov.no_expansion) c.expansion_model = false;
    if (ov.gravity) c.gravity = true;
    c.validate();
    return c;
}

int cmd_simulate(const dlcz::ExperimentConfig& config, const std::string& outdir) {
    dlcz::SweepConfig sc = config.sweep_config();
    const dlcz::StorageRun run = dlcz::run_storage_experiment(
        config.theta_s_deg * deg, config.freezing, sc);

    const std::string eff_csv = dlcz::curve_to_csv(run.efficiency);
    const std::string g2_csv = dlcz::g2_points_to_csv(run.g2);
    dlcz::write_file(outdir + "/efficiency.csv", eff_csv);
    dlcz::write_file(outdir + "/g2.csv", g2_csv);

    // Refit the serialized curves so `fit -i efficiency.csv` reproduces the
    // sidecar numbers exactly despite the CSV rounding.
    const auto eff_fit =
        dlcz::fit_decay(dlcz::curve_from_csv(eff_csv), run.efficiency_fit.model);
    const auto g2_fit =
        dlcz::fit_decay(dlcz::curve_from_csv(g2_csv), run.g2_fit.model);
    dlcz::write_file(outdir + "/run.json",
                     dlcz::sidecar_json(config, {{"efficiency", eff_fit},
                                                 {"g2", g2_fit}}));

    const auto tau = dlcz::lifetime_with_error(eff_fit);
    if (tau) {
        std::cout << "lifetime "
                  << dlcz::format_value_with_error(tau->first * 1e6,
                                                   tau->second * 1e6, "us")
                  << "\n";
    } else {
        std::cout << "lifetime not identifiable from this curve\n";
    }
    std::cout << "wrote " << outdir << "/efficiency.csv, g2.csv, run.json\n";
    return 0;
}

int cmd_sweep(const dlcz::ExperimentConfig& config, std::vector<double> angles_deg,
              const std::string& mode, const std::string& outdir) {
    if (angles_deg.size() < 2)
        throw dlcz::DomainError("sweep: need at least 2 angles");
    std::vector<double> angles;
    for (double a : angles_deg) angles.push_back(a * deg);

    dlcz::SweepConfig sc = config.sweep_config();
    std::vector<dlcz::SweepRow> rows;
    if (mode == "unfrozen" || mode == "both") {
        auto r = dlcz::angle_sweep(angles, false, sc);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    if (mode == "frozen" || mode == "both") {
        auto r = dlcz::angle_sweep(angles, true, sc);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    dlcz::write_file(outdir + "/sweep.csv", dlcz::sweep_to_csv(rows));

    std::sort(angles.begin(), angles.end());
    const auto theory = dlcz::theory_overlay(angles, config.convention(),
                                             config.species(),
                                             config.temperature_uk * 1e-6);
    dlcz::write_file(outdir + "/theory.csv", dlcz::theory_to_csv(theory));
    dlcz::write_file(outdir + "/sweep.json", dlcz::sidecar_json(config, {}));
    std::cout << "wrote " << rows.size() << " rows to " << outdir
              << "/sweep.csv (+ theory.csv, sweep.json)\n";
    return 0;
}

int cmd_fit(const std::string& input, const std::string& model_name,
            const std::string& out) {
    const dlcz::DecayCurve curve = dlcz::curve_from_csv(dlcz::read_file(input));
    if (curve.samples.size() < 5)
        throw dlcz::DomainError("fit: curve has " +
                                std::to_string(curve.samples.size()) +
                                " samples, need at least 5");
    const dlcz::FitModel model = dlcz::fit_model_from_string(model_name);
    const dlcz::FitResult fit = dlcz::fit_decay(curve, model);
    const std::string report = dlcz::fit_to_json(fit);
    std::cout << report;
    if (!out.empty()) dlcz::write_file(out, report);
    return 0;
}

int cmd_geometry(const dlcz::ExperimentConfig& config) {
    const double theta = config.theta_s_deg * deg;
    const dlcz::SpeciesParams species = config.species();
    const double k = 2.0 * std::numbers::pi / species.wavelength_write;
    const dlcz::BeamGeometry geom = dlcz::BeamGeometry::standard(
        theta, config.mode_waist_writeout_um * 1e-6,
        config.mode_waist_control_um * 1e-6);
    const dlcz::WaveVector3 k_s = dlcz::spinwave_wavevector(
        geom.dir_write * k, geom.dir_writeout * k);
    const auto sol = dlcz::solve_freezing_geometry(k_s, species.wavelength_raman);
    const dlcz::WaveVector3 kick = dlcz::kick_vector(sol.pair);

    char buf[256];
    std::snprintf(buf, sizeof buf, "theta_s        %.6g deg\n", config.theta_s_deg);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "|k_s|          %.6g rad/m\n", k_s.norm());
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "k_s            (%.6g, %.6g, %.6g)\n", k_s.x,
                  k_s.y, k_s.z);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "raman plus     (%.6g, %.6g, %.6g)\n",
                  sol.pair.dir_plus.x, sol.pair.dir_plus.y, sol.pair.dir_plus.z);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "raman minus    (%.6g, %.6g, %.6g)\n",
                  sol.pair.dir_minus.x, sol.pair.dir_minus.y, sol.pair.dir_minus.z);
    std::cout << buf;
    const double angle = std::acos(std::clamp(
        sol.pair.dir_plus.dot(sol.pair.dir_minus), -1.0, 1.0));
    std::snprintf(buf, sizeof buf, "pair angle     %.6g deg\n", angle / deg);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "kick           (%.6g, %.6g, %.6g)\n", kick.x,
                  kick.y, kick.z);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "residual       %.6g rad/m (%.3g of |k_s|)\n",
                  sol.residual, sol.residual / k_s.norm());
    std::cout << buf;
    return 0;
}

int cmd_ramsey(const dlcz::ExperimentConfig& config, double gap_us,
               double span_khz, std::size_t points, const std::string& out) {
    if (points < 2) throw dlcz::DomainError("ramsey: need at least 2 points");
    dlcz::RamanPulse pulse;
    pulse.rabi_frequency = config.rabi_frequency_khz * 1e3;
    pulse.duration = dlcz::pi_pulse_duration(pulse.rabi_frequency) / 2.0;
    pulse.delta_k = {0.0, 0.0, 0.0};

    std::string csv = "detuning_hz,population\n";
    char buf[128];
    for (std::size_t i = 0; i < points; ++i) {
        const double f = -span_khz * 500.0 +
                         span_khz * 1000.0 * static_cast<double>(i) /
                             static_cast<double>(points - 1);
        const double p = dlcz::ramsey_fringe(f, gap_us * 1e-6, pulse);
        std::snprintf(buf, sizeof buf, "%.6g,%.9g\n", f, p);
        csv += buf;
    }
    if (out.empty())
        std::cout << csv;
    else
        dlcz::write_file(out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atomic-ensemble quantum memory simulator"};
    app.require_subcommand(1);

    Overrides ov;
    std::string outdir = ".";
    std::string mode = "both";
    std::vector<double> angles_deg;
    std::string fit_input, fit_out, fit_model = "gaussian";
    double gap_us = 200.0, span_khz = 20.0;
    std::size_t ramsey_points = 81;
    std::string ramsey_out;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one storage experiment, write decay and g2 curves");
    add_common_flags(simulate, ov);
    simulate->add_option("-o,--out", outdir, "output directory");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "lifetime and g2 versus detection angle");
    add_common_flags(sweep, ov);
    sweep->add_option("-o,--out", outdir, "output directory");
    sweep->add_option("--angles", angles_deg, "angles in degrees")->required();
    sweep->add_option("--mode", mode, "unfrozen, frozen or both")
        ->check(CLI::IsMember({"unfrozen", "frozen", "both"}));

    CLI::App* fit = app.add_subcommand("fit", "fit a decay curve CSV");
    fit->add_option("-i,--input", fit_input, "curve CSV")->required();
    fit->add_option("--model", fit_model, "gaussian or exponential")
        ->check(CLI::IsMember({"gaussian", "exponential"}));
    fit->add_option("-o,--out", fit_out, "write the fit report here too");

    CLI::App* geometry =
        app.add_subcommand("geometry", "freezing beam geometry report");
    add_common_flags(geometry, ov);

    CLI::App* ramsey =
        app.add_subcommand("ramsey", "two-photon detuning calibration fringe");
    add_common_flags(ramsey, ov);
    ramsey->add_option("--gap", gap_us, "time between the pi/2 pulses, us");
    ramsey->add_option("--span", span_khz, "detuning span, kHz");
    ramsey->add_option("--points", ramsey_points, "scan points");
    ramsey->add_option("-o,--out", ramsey_out, "fringe CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(resolve(simulate, ov), outdir);
        if (sweep->parsed())
            return cmd_sweep(resolve(sweep, ov), angles_deg, mode, outdir);
        if (fit->parsed()) return cmd_fit(fit_input, fit_model, fit_out);
        if (geometry->parsed()) return cmd_geometry(resolve(geometry, ov));
        if (ramsey->parsed())
            return cmd_ramsey(resolve(ramsey, ov), gap_us, span_khz, ramsey_points,
                              ramsey_out);
    } catch (const dlcz::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const dlcz::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dlcz::GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dlcz::SequenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const dlcz::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
