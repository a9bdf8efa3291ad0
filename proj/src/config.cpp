#include "dlcz/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dlcz {

using nlohmann::json;

ExperimentConfig::ExperimentConfig() { mass_kg = SpeciesParams::rb87().mass; }

void ExperimentConfig::validate() const {
    species().validate();
    cloud().validate();
    DetectionParams d = detection();
    d.validate();
    if (!(theta_s_deg > 0.0 && theta_s_deg <= 10.0))
        throw ConfigError("config: theta_s_deg must be in (0, 10]");
    if (!(mode_waist_writeout_um > 0.0 && mode_waist_control_um > 0.0))
        throw ConfigError("config: waists must be positive");
    if (!(rabi_frequency_khz > 0.0))
        throw ConfigError("config: rabi_frequency_khz must be positive");
    if (!(transfer_per_pulse >= 0.0 && transfer_per_pulse <= 1.0))
        throw ConfigError("config: transfer_per_pulse must be in [0,1]");
    if (!(raman_mode_match >= 0.0 && raman_mode_match <= 1.0))
        throw ConfigError("config: raman_mode_match must be in [0,1]");
    if (n_atoms < 2) throw ConfigError("config: n_atoms must be >= 2");
    if (n_trials < 1) throw ConfigError("config: n_trials must be >= 1");
    if (probe_points < 5) throw ConfigError("config: probe_points must be >= 5");
    if (probe_max_us < 0.0) throw ConfigError("config: probe_max_us must be >= 0");
    if (gradient_mhz_per_m < 0.0)
        throw ConfigError("config: gradient_mhz_per_m must be >= 0");
    if (!(g2_shots > 0.0)) throw ConfigError("config: g2_shots must be positive");
    if (speed_convention != "rms_1d" && speed_convention != "paper_1d")
        throw ConfigError("config: speed_convention must be rms_1d or paper_1d");
}

SpeciesParams ExperimentConfig::species() const {
    SpeciesParams s;
    s.mass = mass_kg;
    s.wavelength_write = wavelength_write_nm * 1e-9;
    s.wavelength_raman = wavelength_raman_nm * 1e-9;
    s.hyperfine_splitting_excited = hyperfine_splitting_excited_mhz;
    return s;
}

CloudParams ExperimentConfig::cloud() const {
    return {temperature_uk * 1e-6,
            {sigma_r_mm[0] * 1e-3, sigma_r_mm[1] * 1e-3, sigma_r_mm[2] * 1e-3},
            atom_count_model};
}

DetectionParams ExperimentConfig::detection() const {
    DetectionParams d;
    d.chi = chi;
    d.eta_wo = eta_wo;
    d.eta_ro = eta_ro;
    d.bg_wo = bg_wo;
    d.bg_ro = bg_ro;
    return d;
}

SweepConfig ExperimentConfig::sweep_config() const {
    SweepConfig sc;
    sc.species = species();
    sc.cloud = cloud();
    sc.mode_waist = mode_waist_writeout_um * 1e-6;
    sc.expansion = expansion_model;
    sc.magnetic = magnetic_model;
    sc.gradient_mhz_per_m = gradient_mhz_per_m;
    sc.detection = detection();
    sc.transfer_per_pulse = transfer_per_pulse;
    sc.raman_mode_match = raman_mode_match;
    sc.g2_shots = g2_shots;
    sc.n_atoms = n_atoms;
    sc.n_trials = n_trials;
    sc.master_seed = master_seed;
    sc.probe_points = probe_points;
    sc.probe_max = probe_max_us * 1e-6;
    sc.threads = threads;
    sc.gravity = gravity;
    return sc;
}

SpeedConvention ExperimentConfig::convention() const {
    return speed_convention == "paper_1d" ? SpeedConvention::paper_1d
                                          : SpeedConvention::rms_1d;
}

namespace {

json to_json(const ExperimentConfig& c) {
    json j;
    j["species"] = {{"mass_kg", c.mass_kg},
                    {"wavelength_write_nm", c.wavelength_write_nm},
                    {"wavelength_raman_nm", c.wavelength_raman_nm},
                    {"hyperfine_splitting_excited_mhz",
                     c.hyperfine_splitting_excited_mhz}};
    j["cloud"] = {{"temperature_uk", c.temperature_uk},
                  {"sigma_r_mm", {c.sigma_r_mm[0], c.sigma_r_mm[1], c.sigma_r_mm[2]}},
                  {"atom_count_model", c.atom_count_model}};
    j["geometry"] = {{"theta_s_deg", c.theta_s_deg},
                     {"mode_waist_writeout_um", c.mode_waist_writeout_um},
                     {"mode_waist_control_um", c.mode_waist_control_um}};
    j["detection"] = {{"chi", c.chi},     {"eta_wo", c.eta_wo},
                      {"eta_ro", c.eta_ro}, {"bg_wo", c.bg_wo},
                      {"bg_ro", c.bg_ro}, {"g2_shots", c.g2_shots}};
    j["raman"] = {{"rabi_frequency_khz", c.rabi_frequency_khz},
                  {"two_photon_detuning_hz", c.two_photon_detuning_hz},
                  {"single_photon_detuning_mhz", c.single_photon_detuning_mhz},
                  {"transfer_per_pulse", c.transfer_per_pulse},
                  {"raman_mode_match", c.raman_mode_match},
                  {"bias_field_g", c.bias_field_g}};
    j["simulation"] = {{"master_seed", c.master_seed},
                       {"n_atoms", c.n_atoms},
                       {"n_trials", c.n_trials},
                       {"probe_points", c.probe_points},
                       {"probe_max_us", c.probe_max_us},
                       {"speed_convention", c.speed_convention},
                       {"threads", c.threads}};
    j["toggles"] = {{"freezing", c.freezing},
                    {"magnetic_model", c.magnetic_model},
                    {"gradient_mhz_per_m", c.gradient_mhz_per_m},
                    {"expansion_model", c.expansion_model},
                    {"gravity", c.gravity}};
    return j;
}

// Reject keys we do not know about, naming the offender.
void check_unknown_keys(const json& given, const json& schema,
                        const std::string& prefix) {
    for (const auto& [key, value] : given.items()) {
        if (!schema.contains(key))
            throw ConfigError("config: unknown key \"" + prefix + key + "\"");
        if (value.is_object() && schema[key].is_object())
            check_unknown_keys(value, schema[key], prefix + key + ".");
    }
}

template <typename T>
void fetch(const json& j, const char* section, const char* key, T& out) {
    if (j.contains(section) && j[section].contains(key))
        out = j[section][key].get<T>();
}

std::pair<int, int> line_col_of_offset(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        j = json::object();  // empty file: all defaults
    } else {
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            const auto [line, col] = line_col_of_offset(text, e.byte);
            throw ConfigError("config parse error at line " + std::to_string(line) +
                              ", column " + std::to_string(col) + ": " + e.what());
        }
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    ExperimentConfig c;
    check_unknown_keys(j, to_json(c), "");

    try {
        fetch(j, "species", "mass_kg", c.mass_kg);
        fetch(j, "species", "wavelength_write_nm", c.wavelength_write_nm);
        fetch(j, "species", "wavelength_raman_nm", c.wavelength_raman_nm);
        fetch(j, "species", "hyperfine_splitting_excited_mhz",
              c.hyperfine_splitting_excited_mhz);
        fetch(j, "cloud", "temperature_uk", c.temperature_uk);
        if (j.contains("cloud") && j["cloud"].contains("sigma_r_mm")) {
            const auto& arr = j["cloud"]["sigma_r_mm"];
            if (!arr.is_array() || arr.size() != 3)
                throw ConfigError("config: cloud.sigma_r_mm must have 3 entries");
            for (int i = 0; i < 3; ++i) c.sigma_r_mm[i] = arr[i].get<double>();
        }
        fetch(j, "cloud", "atom_count_model", c.atom_count_model);
        fetch(j, "geometry", "theta_s_deg", c.theta_s_deg);
        fetch(j, "geometry", "mode_waist_writeout_um", c.mode_waist_writeout_um);
        fetch(j, "geometry", "mode_waist_control_um", c.mode_waist_control_um);
        fetch(j, "detection", "chi", c.chi);
        fetch(j, "detection", "eta_wo", c.eta_wo);
        fetch(j, "detection", "eta_ro", c.eta_ro);
        fetch(j, "detection", "bg_wo", c.bg_wo);
        fetch(j, "detection", "bg_ro", c.bg_ro);
        fetch(j, "detection", "g2_shots", c.g2_shots);
        fetch(j, "raman", "rabi_frequency_khz", c.rabi_frequency_khz);
        fetch(j, "raman", "two_photon_detuning_hz", c.two_photon_detuning_hz);
        fetch(j, "raman", "single_photon_detuning_mhz", c.single_photon_detuning_mhz);
        fetch(j, "raman", "transfer_per_pulse", c.transfer_per_pulse);
        fetch(j, "raman", "raman_mode_match", c.raman_mode_match);
        fetch(j, "raman", "bias_field_g", c.bias_field_g);
        fetch(j, "simulation", "master_seed", c.master_seed);
        fetch(j, "simulation", "n_atoms", c.n_atoms);
        fetch(j, "simulation", "n_trials", c.n_trials);
        fetch(j, "simulation", "probe_points", c.probe_points);
        fetch(j, "simulation", "probe_max_us", c.probe_max_us);
        fetch(j, "simulation", "speed_convention", c.speed_convention);
        fetch(j, "simulation", "threads", c.threads);
        fetch(j, "toggles", "freezing", c.freezing);
        fetch(j, "toggles", "magnetic_model", c.magnetic_model);
        fetch(j, "toggles", "gradient_mhz_per_m", c.gradient_mhz_per_m);
        fetch(j, "toggles", "expansion_model", c.expansion_model);
        fetch(j, "toggles", "gravity", c.gravity);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string ExperimentConfig::canonical_json() const {
    return to_json(*this).dump(2);  // nlohmann sorts object keys
}

std::string ExperimentConfig::hash() const {
    const std::string s = canonical_json();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dlcz
