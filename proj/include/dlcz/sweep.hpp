#ifndef DLCZ_SWEEP_HPP
#define DLCZ_SWEEP_HPP

#include <optional>
#include <vector>

#include "dlcz/fit.hpp"
#include "dlcz/montecarlo.hpp"
#include "dlcz/photon.hpp"

namespace dlcz {

struct SweepRow {
    double theta_s = 0.0;   // rad
    bool freezing = false;
    double tau_1e = 0.0;    // s
    double tau_err = 0.0;   // s
    double g2_initial = 0.0;
    double g2_err = 0.0;
    double kick_residual = 0.0;  // |k_s + k_pi| from the geometry solver
};

struct SweepConfig {
    SpeciesParams species = SpeciesParams::rb87();
    CloudParams cloud{13e-6, {1e-3, 1e-3, 1e-3}, 1e8};
    double mode_waist = 90e-6;          // m, write-out detection mode
    bool expansion = true;              // mode weighting on frozen runs
    bool magnetic = false;
    double gradient_mhz_per_m = 0.0;
    bool unfrozen_mode_weighting = false;
    DetectionParams detection = DetectionParams::calibrated();
    double transfer_per_pulse = 0.95;
    double raman_mode_match = 0.65;     // frozen-path calibration loss
    double g2_shots = 1e6;              // write trials per point for error bars
    std::size_t n_atoms = 10000;
    std::size_t n_trials = 32;
    std::uint64_t master_seed = 20260824;
    std::size_t probe_points = 12;
    double probe_max = 0.0;             // s; 0: auto from predicted lifetime
    double frozen_probe_max = 4.5e-3;   // s, used when probe_max is auto
    int threads = 0;
    bool gravity = false;
};

// Probe grid helper: `points` times linearly spaced on (0, t_max].
std::vector<double> probe_grid(double t_max, std::size_t points,
                               double t_min = 0.0);

struct StorageRun {
    DecayCurve efficiency;
    std::vector<CorrelationPoint> g2;
    FitResult efficiency_fit;
    FitResult g2_fit;
    double eta0 = 1.0;       // overall scale applied before photon statistics
    double kick_residual = 0.0;
};

// One full storage experiment at a fixed angle: MC decay curve, g2 curve,
// Gaussian fits of both.
StorageRun run_storage_experiment(double theta_s, bool freezing,
                                  const SweepConfig& config);

// Fig.-4-style comparison: one row per angle, frozen or unfrozen.
std::vector<SweepRow> angle_sweep(const std::vector<double>& angles, bool freezing,
                                  const SweepConfig& config);

struct TheoryPoint {
    double theta_s = 0.0;  // rad
    double tau = 0.0;      // s
};

// tau_s(theta) = 1/(k_s(theta) v) for the chosen speed convention.
std::vector<TheoryPoint> theory_overlay(const std::vector<double>& angles,
                                        SpeedConvention convention,
                                        const SpeciesParams& species,
                                        double temperature);

}  // namespace dlcz

#endif
