#ifndef DLCZ_CORE_HPP
#define DLCZ_CORE_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace dlcz {

// Error categories used across the library.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class SequenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        if (n == 0.0) throw GeometryError("cannot normalize zero vector");
        return {x / n, y / n, z / n};
    }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Wave vectors carry all phase-matching algebra; components in rad/m.
using WaveVector3 = Vec3;

// Fixed reference values, never user-mutable.
namespace constants {
inline constexpr double k_B = 1.380649e-23;          // J/K
inline constexpr double h = 6.62607015e-34;          // J s
inline constexpr double mu_B_over_h = 1.39962449;    // MHz/G
inline constexpr double amu = 1.66053906660e-27;     // kg
inline constexpr double g_earth = 9.80665;           // m/s^2
}  // namespace constants

struct SpeciesParams {
    double mass;                          // kg
    double wavelength_write;              // m
    double wavelength_raman;              // m
    double hyperfine_splitting_excited;   // MHz, D1 excited-state splitting

    void validate() const;
    static SpeciesParams rb87();
};

struct ZeemanState {
    int F = 0;
    int mF = 0;
    bool operator==(const ZeemanState&) const = default;
    bool operator<(const ZeemanState& o) const {
        return F != o.F ? F < o.F : mF < o.mF;
    }
};

struct LevelScheme {
    ZeemanState g;        // initial ground state
    ZeemanState s;        // storage state
    ZeemanState s_prime;  // auxiliary storage state
    ZeemanState e;        // excited state
    std::map<int, double> g_factors;  // Lande g_F per ground F manifold

    void validate() const;
    bool clock_pair() const;  // g and s' have equal first-order shifts
    static LevelScheme rb87_clock();
};

struct CloudParams {
    double temperature;   // K
    Vec3 sigma_r;         // Gaussian position spread per axis, m
    double atom_count_model;  // nominal N

    void validate() const;
};

struct BeamGeometry {
    Vec3 dir_write;
    Vec3 dir_writeout;
    Vec3 dir_read;
    Vec3 dir_readout;
    Vec3 dir_raman_plus;
    Vec3 dir_raman_minus;
    double theta_s;              // rad, angle between write and write-out
    double mode_waist_writeout;  // m
    double mode_waist_control;   // m

    void validate() const;

    // Standard layout: write along +x, write-out tilted by theta_s in the
    // x-y plane, read counter-propagating. Raman directions are filled in
    // later by the freezing-geometry solver.
    static BeamGeometry standard(double theta_s_rad, double mode_waist_writeout,
                                 double mode_waist_control);
};

// k = (2 pi / lambda) * direction
WaveVector3 wavevector_from_beam(const Vec3& direction, double wavelength);

// k_s = k_w - k_wo
WaveVector3 spinwave_wavevector(const WaveVector3& k_w, const WaveVector3& k_wo);

// |k_s| = 2 (2 pi / lambda) sin(theta/2) for equal-magnitude beams
double spinwave_magnitude_small_angle(double theta_s, double wavelength);

enum class SpeedConvention { rms_1d, paper_1d };

// rms_1d: sqrt(kB T / m); paper_1d: sqrt(pi kB T / 2 m)
double thermal_speed(double temperature, double mass, SpeedConvention convention);

// First-order shift g_F * m_F * (mu_B/h) * B, in MHz.
double zeeman_shift_first_order(const ZeemanState& state,
                                const std::map<int, double>& g_factors,
                                double field_gauss);

}  // namespace dlcz

#endif
