#include "dlcz/core.hpp"

#include <algorithm>
#include <numbers>

namespace dlcz {

void SpeciesParams::validate() const {
    if (!(mass > 0.0)) throw DomainError("species: mass must be positive");
    for (double wl : {wavelength_write, wavelength_raman}) {
        if (!(wl > 100e-9 && wl < 10e-6))
            throw DomainError("species: wavelength outside (100 nm, 10 um)");
    }
    if (!(hyperfine_splitting_excited > 0.0))
        throw DomainError("species: excited-state splitting must be positive");
}

SpeciesParams SpeciesParams::rb87() {
    SpeciesParams p;
    p.mass = 86.909180527 * constants::amu;
    p.wavelength_write = 780.241e-9;  // D2
    p.wavelength_raman = 794.979e-9;  // D1
    // Chosen so that half the splitting is the 408 MHz operating point.
    p.hyperfine_splitting_excited = 816.0;
    return p;
}

void LevelScheme::validate() const {
    if (s == s_prime) throw DomainError("levels: s and s' must differ");
    for (const auto& st : {g, s, s_prime}) {
        if (g_factors.find(st.F) == g_factors.end())
            throw DomainError("levels: missing g-factor for F=" + std::to_string(st.F));
        if (std::abs(st.mF) > st.F) throw DomainError("levels: |mF| > F");
    }
}

bool LevelScheme::clock_pair() const {
    const double a = zeeman_shift_first_order(g, g_factors, 1.0);
    const double b = zeeman_shift_first_order(s_prime, g_factors, 1.0);
    return a == b;
}

LevelScheme LevelScheme::rb87_clock() {
    LevelScheme lv;
    lv.g = {1, -1};
    lv.s = {2, -1};
    lv.s_prime = {2, +1};
    lv.e = {2, 0};
    lv.g_factors = {{1, -0.5}, {2, +0.5}};
    return lv;
}

void CloudParams::validate() const {
    if (!(temperature > 0.0)) throw DomainError("cloud: temperature must be positive");
    if (!(sigma_r.x > 0.0 && sigma_r.y > 0.0 && sigma_r.z > 0.0))
        throw DomainError("cloud: sigma_r components must be positive");
    if (!(atom_count_model >= 2.0)) throw DomainError("cloud: N must be >= 2");
}

void BeamGeometry::validate() const {
    const Vec3* dirs[] = {&dir_write, &dir_writeout, &dir_read, &dir_readout};
    for (const Vec3* d : dirs) {
        if (std::abs(d->norm() - 1.0) > 1e-12)
            throw GeometryError("beam direction is not unit-norm");
    }
    const double ang = std::acos(std::clamp(dir_write.dot(dir_writeout), -1.0, 1.0));
    if (std::abs(ang - theta_s) > 1e-9)
        throw GeometryError("theta_s inconsistent with write/write-out directions");
    if (!(mode_waist_writeout > 0.0 && mode_waist_control > 0.0))
        throw GeometryError("waists must be positive");
}

BeamGeometry BeamGeometry::standard(double theta_s_rad, double mode_waist_writeout,
                                    double mode_waist_control) {
    BeamGeometry g;
    g.dir_write = {1.0, 0.0, 0.0};
    g.dir_writeout = {std::cos(theta_s_rad), std::sin(theta_s_rad), 0.0};
    g.dir_read = {-1.0, 0.0, 0.0};
    g.dir_readout = -g.dir_writeout;
    g.dir_raman_plus = g.dir_writeout;
    g.dir_raman_minus = g.dir_write;
    g.theta_s = theta_s_rad;
    g.mode_waist_writeout = mode_waist_writeout;
    g.mode_waist_control = mode_waist_control;
    g.validate();
    return g;
}

WaveVector3 wavevector_from_beam(const Vec3& direction, double wavelength) {
    if (std::abs(direction.norm() - 1.0) > 1e-12)
        throw GeometryError("wavevector_from_beam: direction must be unit-norm");
    if (!(wavelength > 0.0))
        throw DomainError("wavevector_from_beam: wavelength must be positive");
    return direction * (2.0 * std::numbers::pi / wavelength);
}

WaveVector3 spinwave_wavevector(const WaveVector3& k_w, const WaveVector3& k_wo) {
    return k_w - k_wo;
}

double spinwave_magnitude_small_angle(double theta_s, double wavelength) {
    if (!(theta_s >= 0.0 && theta_s < std::numbers::pi / 4.0))
        throw DomainError("spinwave_magnitude_small_angle: theta_s out of [0, pi/4)");
    if (!(wavelength > 0.0))
        throw DomainError("spinwave_magnitude_small_angle: wavelength must be positive");
    return 2.0 * (2.0 * std::numbers::pi / wavelength) * std::sin(theta_s / 2.0);
}

double thermal_speed(double temperature, double mass, SpeedConvention convention) {
    if (!(temperature > 0.0) || !(mass > 0.0))
        throw DomainError("thermal_speed: temperature and mass must be positive");
    const double rms = std::sqrt(constants::k_B * temperature / mass);
    if (convention == SpeedConvention::rms_1d) return rms;
    return std::sqrt(std::numbers::pi / 2.0) * rms;
}

double zeeman_shift_first_order(const ZeemanState& state,
                                const std::map<int, double>& g_factors,
                                double field_gauss) {
    auto it = g_factors.find(state.F);
    if (it == g_factors.end())
        throw DomainError("zeeman_shift_first_order: unknown F manifold");
    if (std::abs(state.mF) > state.F)
        throw DomainError("zeeman_shift_first_order: |mF| > F");
    return it->second * state.mF * constants::mu_B_over_h * field_gauss;
}

}  // namespace dlcz
