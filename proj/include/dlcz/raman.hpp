#ifndef DLCZ_RAMAN_HPP
#define DLCZ_RAMAN_HPP

#include <optional>
#include <string>

#include "dlcz/core.hpp"
#include "dlcz/montecarlo.hpp"

namespace dlcz {

struct RamanPulse {
    double rabi_frequency;       // two-photon Rabi frequency, Hz (cycles)
    double two_photon_detuning;  // Hz
    double duration;             // s
    WaveVector3 delta_k;         // momentum kick k_+ - k_-
    double start_time = 0.0;     // s

    void validate() const;
};

struct RamanBeamPair {
    Vec3 dir_plus;
    Vec3 dir_minus;
    double wavelength;                 // m
    double single_photon_detuning;     // MHz, relative to upper excited line

    void validate() const;
};

// k_pi = k_+ - k_-
WaveVector3 kick_vector(const RamanBeamPair& pair);

// Geometric restriction on the Raman beams. Both beams must lie in the
// plane with the given normal; optionally their intersection angle is
// pinned (the apparatus arrangement where it equals theta_s).
struct PlaneConstraint {
    Vec3 normal = {0.0, 0.0, 1.0};
    std::optional<double> fixed_intersection_angle;  // rad
};

struct FreezeSolution {
    RamanBeamPair pair;
    double residual;  // |k_s + k_pi|, rad/m
};

// Find beam directions whose two-photon kick cancels k_s. When the
// constraint excludes an exact solution, the in-plane pair minimizing
// |k_s + k_pi| is returned with the residual reported.
FreezeSolution solve_freezing_geometry(const WaveVector3& k_s,
                                       double wavelength_raman,
                                       const PlaneConstraint& constraint = {});

// Detuned Rabi flopping, P(t) = Omega^2/(Omega^2+delta^2) sin^2(pi W t),
// W = sqrt(Omega^2+delta^2), all frequencies in Hz (cycles).
double transfer_probability(const RamanPulse& pulse, double t);

// Resonant pi-pulse duration 1/(2 Omega).
double pi_pulse_duration(double rabi_frequency);

// Two-path effective Rabi frequency, Omega_eff = (w+ w-/2)|1/D1 + s/D2|.
double effective_rabi(double omega_plus, double omega_minus, double detuning1_mhz,
                      double detuning2_mhz, int relative_sign);

// Coherence figure of merit Omega_eff^2 / Gamma_scatter for a beam pair
// addressing two excited lines split by `splitting`; the bare Omega_eff
// diverges at either line, so scans optimize Rabi cycles per scattering
// event instead. Peaks at detuning1 = -splitting/2 for relative_sign -1.
double rabi_per_scattering(double omega_plus, double omega_minus,
                           double detuning1_mhz, double splitting_mhz,
                           int relative_sign);

// Population in s' after pi/2 -- gap -- pi/2 with the given two-photon
// detuning. Exact two-level evolution, no rotating-frame approximations
// beyond the pulse description itself.
double ramsey_fringe(double two_photon_detuning, double gap, const RamanPulse& pulse);

enum class KickDirection { freeze, unfreeze };

struct KickWithLoss {
    KickEvent event;
    double amplitude_scale;  // transfer probability, applied as pure loss
};

// Idealize a pulse as an instantaneous kick at its center. Unfreeze
// negates the kick (k'_pi = k_- - k_+). Untransferred population is
// treated as lost, not as coherent background.
KickWithLoss pulse_to_kicks(const RamanPulse& pulse, KickDirection direction);

}  // namespace dlcz

#endif
