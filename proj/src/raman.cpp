#include "dlcz/raman.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace dlcz {

namespace {
constexpr double pi = std::numbers::pi;
}

void RamanPulse::validate() const {
    if (!(rabi_frequency > 0.0))
        throw DomainError("RamanPulse: rabi_frequency must be positive");
    if (!(duration >= 0.0)) throw DomainError("RamanPulse: duration must be >= 0");
}

void RamanBeamPair::validate() const {
    for (const Vec3* d : {&dir_plus, &dir_minus}) {
        if (std::abs(d->norm() - 1.0) > 1e-12)
            throw GeometryError("RamanBeamPair: direction is not unit-norm");
    }
    if (!(wavelength > 0.0))
        throw DomainError("RamanBeamPair: wavelength must be positive");
    if (!std::isfinite(single_photon_detuning))
        throw DomainError("RamanBeamPair: detuning must be finite");
}

WaveVector3 kick_vector(const RamanBeamPair& pair) {
    pair.validate();
    return (pair.dir_plus - pair.dir_minus) * (2.0 * pi / pair.wavelength);
}

FreezeSolution solve_freezing_geometry(const WaveVector3& k_s,
                                       double wavelength_raman,
                                       const PlaneConstraint& constraint) {
    if (!(wavelength_raman > 0.0))
        throw DomainError("solve_freezing_geometry: wavelength must be positive");
    const double kappa = 2.0 * pi / wavelength_raman;
    const double ks_mag = k_s.norm();
    if (ks_mag > 2.0 * kappa)
        throw GeometryError("solve_freezing_geometry: |k_s| exceeds 2k, unreachable");

    const Vec3 n = constraint.normal.normalized();

    RamanBeamPair pair;
    pair.wavelength = wavelength_raman;
    pair.single_photon_detuning = 0.0;

    if (ks_mag == 0.0) {
        // Copropagating pair, zero kick. Pick an in-plane direction.
        Vec3 any = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        const Vec3 dir = (any - n * any.dot(n)).normalized();
        pair.dir_plus = dir;
        pair.dir_minus = dir;
        return {pair, 0.0};
    }

    // Want d+ - d- = -k_s / kappa. Split the target difference u into a
    // half-difference c and an in-plane bisector b with |c|^2 + |b|^2 = 1.
    const Vec3 u_full = -k_s * (1.0 / kappa);
    const Vec3 u_inplane = u_full - n * u_full.dot(n);

    Vec3 u = u_inplane;
    if (constraint.fixed_intersection_angle) {
        // Apparatus mode: the intersection angle is pinned, so only the
        // kick direction can be matched; the magnitude is whatever
        // 2 sin(angle/2) provides.
        const double mag = 2.0 * std::sin(*constraint.fixed_intersection_angle / 2.0);
        if (u_inplane.norm() == 0.0)
            throw GeometryError("solve_freezing_geometry: k_s normal to plane");
        u = u_inplane.normalized() * mag;
    }
    if (u.norm() > 2.0)
        throw GeometryError("solve_freezing_geometry: constrained kick unreachable");

    const Vec3 c = u * 0.5;
    const double b_mag_sq = 1.0 - c.dot(c);
    const double b_mag = std::sqrt(std::max(0.0, b_mag_sq));
    Vec3 b{0.0, 0.0, 0.0};
    if (b_mag > 0.0) {
        const Vec3 b_dir = n.cross(c.normalized());
        b = b_dir.normalized() * b_mag;
    }
    pair.dir_plus = (b + c).normalized();
    pair.dir_minus = (b - c).normalized();

    const double residual = (k_s + kick_vector(pair)).norm();
    return {pair, residual};
}

double transfer_probability(const RamanPulse& pulse, double t) {
    pulse.validate();
    if (!(t >= 0.0 && t <= pulse.duration))
        throw DomainError("transfer_probability: t outside [0, duration]");
    const double w2 = pulse.rabi_frequency * pulse.rabi_frequency;
    const double d2 = pulse.two_photon_detuning * pulse.two_photon_detuning;
    const double generalized = std::sqrt(w2 + d2);
    const double s = std::sin(pi * generalized * t);
    return (w2 / (w2 + d2)) * s * s;
}

double pi_pulse_duration(double rabi_frequency) {
    if (!(rabi_frequency > 0.0))
        throw DomainError("pi_pulse_duration: rabi_frequency must be positive");
    return 1.0 / (2.0 * rabi_frequency);
}

double effective_rabi(double omega_plus, double omega_minus, double detuning1_mhz,
                      double detuning2_mhz, int relative_sign) {
    if (detuning1_mhz == 0.0 || detuning2_mhz == 0.0)
        throw DomainError("effective_rabi: zero single-photon detuning");
    if (relative_sign != 1 && relative_sign != -1)
        throw DomainError("effective_rabi: relative_sign must be +1 or -1");
    const double paths = 1.0 / detuning1_mhz +
                         static_cast<double>(relative_sign) / detuning2_mhz;
    return 0.5 * omega_plus * omega_minus * std::abs(paths);
}

double rabi_per_scattering(double omega_plus, double omega_minus,
                           double detuning1_mhz, double splitting_mhz,
                           int relative_sign) {
    if (!(splitting_mhz > 0.0))
        throw DomainError("rabi_per_scattering: splitting must be positive");
    const double detuning2_mhz = detuning1_mhz + splitting_mhz;
    const double rabi = effective_rabi(omega_plus, omega_minus, detuning1_mhz,
                                       detuning2_mhz, relative_sign);
    const double scatter = 1.0 / (detuning1_mhz * detuning1_mhz) +
                           1.0 / (detuning2_mhz * detuning2_mhz);
    return rabi * rabi / scatter;
}

namespace {

struct Mat2 {
    std::complex<double> a, b, c, d;  // row-major 2x2
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

// Rotating-frame propagator for H/h = (delta/2) sigma_z + (Omega/2) sigma_x,
// frequencies in Hz (cycles), duration in s.
Mat2 rabi_propagator(double rabi, double delta, double duration) {
    const double g = std::sqrt(rabi * rabi + delta * delta);
    const double phase = pi * g * duration;
    const std::complex<double> i{0.0, 1.0};
    if (g == 0.0) return {1.0, 0.0, 0.0, 1.0};
    const double cs = std::cos(phase);
    const double sn = std::sin(phase);
    const double nz = delta / g;
    const double nx = rabi / g;
    return {cs - i * nz * sn, -i * nx * sn, -i * nx * sn, cs + i * nz * sn};
}

}  // namespace

double ramsey_fringe(double two_photon_detuning, double gap,
                     const RamanPulse& pulse) {
    pulse.validate();
    if (!(gap >= 0.0)) throw DomainError("ramsey_fringe: gap must be >= 0");
    const Mat2 half = rabi_propagator(pulse.rabi_frequency, two_photon_detuning,
                                      pulse.duration);
    const Mat2 free = rabi_propagator(0.0, two_photon_detuning, gap);
    const Mat2 u = half * free * half;
    // Start in |s> = (1, 0); population transferred to |s'> is |u21|^2.
    return std::norm(u.c);
}

KickWithLoss pulse_to_kicks(const RamanPulse& pulse, KickDirection direction) {
    pulse.validate();
    KickWithLoss out;
    out.event.time = pulse.start_time + pulse.duration / 2.0;
    out.event.delta_k =
        direction == KickDirection::freeze ? pulse.delta_k : -pulse.delta_k;
    out.event.label = direction == KickDirection::freeze ? "freeze" : "unfreeze";
    out.amplitude_scale = transfer_probability(pulse, pulse.duration);
    return out;
}

}  // namespace dlcz
