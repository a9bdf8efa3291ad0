#ifndef DLCZ_CONFIG_HPP
#define DLCZ_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dlcz/core.hpp"
#include "dlcz/photon.hpp"
#include "dlcz/sweep.hpp"

namespace dlcz {

// Fully resolved experiment configuration. Defaults mirror the apparatus
// numbers; every output embeds the resolved config plus its hash.
struct ExperimentConfig {
    // species
    double mass_kg;
    double wavelength_write_nm = 780.241;
    double wavelength_raman_nm = 794.979;
    double hyperfine_splitting_excited_mhz = 816.0;

    // cloud
    double temperature_uk = 13.0;
    double sigma_r_mm[3] = {1.0, 1.0, 1.0};
    double atom_count_model = 1e8;

    // geometry
    double theta_s_deg = 2.1;
    double mode_waist_writeout_um = 90.0;
    double mode_waist_control_um = 200.0;

    // detection (calibration, see README)
    double chi = 0.0038;
    double eta_wo = 1.0;
    double eta_ro = 1.0;
    double bg_wo = 0.0;
    double bg_ro = 0.0256117647058823529;
    double g2_shots = 1e6;

    // raman
    double rabi_frequency_khz = 230.0;
    double two_photon_detuning_hz = 0.0;
    double single_photon_detuning_mhz = -408.0;
    double transfer_per_pulse = 0.95;
    double raman_mode_match = 0.65;
    double bias_field_g = 1.5;

    // simulation
    std::uint64_t master_seed = 20260824;
    std::size_t n_atoms = 10000;
    std::size_t n_trials = 32;
    std::size_t probe_points = 12;
    double probe_max_us = 0.0;  // 0: auto from the predicted lifetime
    std::string speed_convention = "rms_1d";
    int threads = 0;

    // toggles
    bool freezing = false;
    bool magnetic_model = false;
    double gradient_mhz_per_m = 0.0;
    bool expansion_model = true;
    bool gravity = false;

    ExperimentConfig();
    void validate() const;

    SpeciesParams species() const;
    CloudParams cloud() const;
    DetectionParams detection() const;
    SweepConfig sweep_config() const;
    SpeedConvention convention() const;

    std::string canonical_json() const;  // stable key order
    std::string hash() const;            // fnv1a-64 of canonical_json, hex
};

// Parse and validate a JSON config file; missing sections fall back to
// defaults, unknown keys are rejected by name.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace dlcz

#endif
