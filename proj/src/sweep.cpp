#include "dlcz/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dlcz/decay.hpp"
#include "dlcz/raman.hpp"

namespace dlcz {

std::vector<double> probe_grid(double t_max, std::size_t points, double t_min) {
    if (!(t_max > t_min) || points < 2)
        throw DomainError("probe_grid: need t_max > t_min and points >= 2");
    std::vector<double> out;
    out.reserve(points);
    for (std::size_t i = 1; i <= points; ++i) {
        out.push_back(t_min + (t_max - t_min) * static_cast<double>(i) /
                                  static_cast<double>(points));
    }
    return out;
}

StorageRun run_storage_experiment(double theta_s, bool freezing,
                                  const SweepConfig& config) {
    if (!(theta_s > 0.0 && theta_s <= 10.0 * std::numbers::pi / 180.0))
        throw DomainError("run_storage_experiment: theta_s outside (0, 10 deg]");

    const double k_w_mag = 2.0 * std::numbers::pi / config.species.wavelength_write;
    const BeamGeometry geom =
        BeamGeometry::standard(theta_s, config.mode_waist, 200e-6);
    const WaveVector3 k_w = geom.dir_write * k_w_mag;
    const WaveVector3 k_wo = geom.dir_writeout * k_w_mag;
    const WaveVector3 k_s = spinwave_wavevector(k_w, k_wo);

    const double sigma_v = thermal_speed(config.cloud.temperature,
                                         config.species.mass,
                                         SpeedConvention::rms_1d);

    StoragePlan plan;
    plan.k_s = k_s;
    plan.freezing = freezing;
    double residual = 0.0;
    if (freezing) {
        // Same-wavelength Raman pair so the kick cancels k_s exactly.
        const auto sol = solve_freezing_geometry(k_s, config.species.wavelength_write);
        plan.freeze_kick = kick_vector(sol.pair);
        residual = sol.residual;
    }
    if (config.magnetic) {
        plan.gradient_mhz_per_m = config.gradient_mhz_per_m;
        plan.stored_pair_clock = freezing;  // g-s' clock pair while frozen
    }

    RunConfig run;
    run.n_atoms = config.n_atoms;
    run.n_trials = config.n_trials;
    run.master_seed = config.master_seed;
    run.cloud = config.cloud;
    run.species = config.species;
    run.threads = config.threads;
    run.gravity = config.gravity;
    const bool weight = freezing ? config.expansion : config.unfrozen_mode_weighting;
    if (weight) run.mode = ModeWeighting{config.mode_waist, geom.dir_writeout};

    std::vector<double> probes;
    if (freezing) {
        const double t_max =
            config.probe_max > 0.0 ? config.probe_max : config.frozen_probe_max;
        probes = probe_grid(t_max, config.probe_points,
                            plan.freeze_time + plan.unfreeze_lead);
    } else {
        const double k_mag = k_s.norm();
        const double tau = 1.0 / (k_mag * sigma_v);
        const double t_max = config.probe_max > 0.0 ? config.probe_max : 2.5 * tau;
        probes = probe_grid(t_max, config.probe_points);
    }

    StorageRun out;
    out.kick_residual = residual;
    out.efficiency = simulate_storage(plan, probes, run);
    out.eta0 = freezing ? config.transfer_per_pulse * config.transfer_per_pulse *
                              config.raman_mode_match
                        : 1.0;

    out.g2.reserve(out.efficiency.samples.size());
    for (const auto& s : out.efficiency.samples) {
        const double eta = std::clamp(out.eta0 * s.value, 0.0, 1.0);
        const auto probs = dlcz_probabilities(config.detection, eta);
        CorrelationPoint pt;
        pt.time = s.time;
        pt.g2 = g2_from_probs(probs.p_wo, probs.p_ro, probs.p_joint);
        pt.g2_err = expected_g2_error(probs, config.g2_shots);
        out.g2.push_back(pt);
    }

    out.efficiency_fit = fit_decay(out.efficiency, FitModel::gaussian_decay);
    DecayCurve g2curve;
    g2curve.label = out.efficiency.label + "_g2";
    for (const auto& p : out.g2) g2curve.samples.push_back({p.time, p.g2, p.g2_err});
    out.g2_fit = fit_decay(g2curve, FitModel::gaussian_decay);
    return out;
}

std::vector<SweepRow> angle_sweep(const std::vector<double>& angles, bool freezing,
                                  const SweepConfig& config) {
    std::vector<double> sorted = angles;
    std::sort(sorted.begin(), sorted.end());
    std::vector<SweepRow> rows;
    rows.reserve(sorted.size());
    for (double theta : sorted) {
        const StorageRun run = run_storage_experiment(theta, freezing, config);
        SweepRow row;
        row.theta_s = theta;
        row.freezing = freezing;
        const auto tau = lifetime_with_error(run.efficiency_fit);
        if (tau) {
            row.tau_1e = tau->first;
            row.tau_err = tau->second;
        }
        // Initial value at t = 0, where the envelope is 1 by normalization.
        const auto p0 = dlcz_probabilities(config.detection, run.eta0);
        row.g2_initial = g2_from_probs(p0.p_wo, p0.p_ro, p0.p_joint);
        row.g2_err = expected_g2_error(p0, config.g2_shots);
        row.kick_residual = run.kick_residual;
        rows.push_back(row);
    }
    return rows;
}

std::vector<TheoryPoint> theory_overlay(const std::vector<double>& angles,
                                        SpeedConvention convention,
                                        const SpeciesParams& species,
                                        double temperature) {
    const double v = thermal_speed(temperature, species.mass, convention);
    std::vector<TheoryPoint> out;
    out.reserve(angles.size());
    for (double theta : angles) {
        if (!(theta > 0.0)) throw DomainError("theory_overlay: angles must be positive");
        const double k = spinwave_magnitude_small_angle(theta,
                                                        species.wavelength_write);
        out.push_back({theta, 1.0 / (k * v)});
    }
    return out;
}

}  // namespace dlcz
