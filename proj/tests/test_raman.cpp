#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dlcz/core.hpp"
#include "dlcz/raman.hpp"

using namespace dlcz;

namespace {

constexpr double deg = std::numbers::pi / 180.0;

WaveVector3 spinwave_at(double theta, double wavelength) {
    const double k = 2.0 * std::numbers::pi / wavelength;
    return spinwave_wavevector(Vec3{1.0, 0.0, 0.0} * k,
                               Vec3{std::cos(theta), std::sin(theta), 0.0} * k);
}

}  // namespace

TEST_CASE("kick vector from a beam pair") {
    RamanBeamPair pair;
    pair.wavelength = 794.979e-9;
    pair.dir_plus = {1.0, 0.0, 0.0};
    pair.dir_minus = {1.0, 0.0, 0.0};
    CHECK(kick_vector(pair).norm() == 0.0);

    pair.dir_minus = {-1.0, 0.0, 0.0};
    CHECK(kick_vector(pair).norm() ==
          doctest::Approx(2.0 * 2.0 * std::numbers::pi / pair.wavelength)
              .epsilon(1e-12));

    pair.dir_minus = {0.5, 0.0, 0.0};
    CHECK_THROWS_AS(kick_vector(pair), GeometryError);
}

TEST_CASE("freezing geometry solver") {
    SUBCASE("zero spin wave gives a copropagating pair") {
        const auto sol = solve_freezing_geometry({0.0, 0.0, 0.0}, 794.979e-9);
        CHECK(sol.residual == 0.0);
        CHECK((sol.pair.dir_plus - sol.pair.dir_minus).norm() == 0.0);
    }

    SUBCASE("same-wavelength solution cancels k_s to machine precision") {
        for (double theta_deg : {1.25, 2.1, 3.0, 4.8}) {
            const auto ks = spinwave_at(theta_deg * deg, 780.241e-9);
            const auto sol = solve_freezing_geometry(ks, 780.241e-9);
            CHECK(sol.residual < 1e-10 * ks.norm());
            // Re-substitution through the public kick accessor.
            CHECK((ks + kick_vector(sol.pair)).norm() < 1e-10 * ks.norm());
            // The kick is antiparallel to k_s.
            CHECK(kick_vector(sol.pair).dot(ks) < 0.0);
        }
    }

    SUBCASE("beams intersect at theta_s when wavelengths match") {
        const double theta = 2.1 * deg;
        const auto ks = spinwave_at(theta, 780.241e-9);
        const auto sol = solve_freezing_geometry(ks, 780.241e-9);
        const double angle =
            std::acos(sol.pair.dir_plus.dot(sol.pair.dir_minus));
        CHECK(angle == doctest::Approx(theta).epsilon(1e-9));
    }

    SUBCASE("wavelength mismatch with pinned angle leaves a residual") {
        const double theta = 2.1 * deg;
        const auto ks = spinwave_at(theta, 780.241e-9);
        PlaneConstraint constraint;
        constraint.fixed_intersection_angle = theta;
        const auto sol = solve_freezing_geometry(ks, 794.979e-9, constraint);
        CHECK(sol.residual > 0.0);
        CHECK(sol.residual == doctest::Approx((ks + kick_vector(sol.pair)).norm())
                                  .epsilon(1e-9));
        // The D1/D2 magnitude mismatch is about 1.9 percent of |k_s|.
        CHECK(sol.residual / ks.norm() == doctest::Approx(0.0185).epsilon(0.05));
    }

    SUBCASE("unreachable kick is rejected") {
        const double k = 2.0 * std::numbers::pi / 794.979e-9;
        CHECK_THROWS_AS(solve_freezing_geometry({3.0 * k, 0.0, 0.0}, 794.979e-9),
                        GeometryError);
    }
}

TEST_CASE("transfer probability") {
    RamanPulse pulse;
    pulse.rabi_frequency = 230e3;
    pulse.two_photon_detuning = 0.0;
    pulse.duration = pi_pulse_duration(230e3);

    CHECK(pulse.duration == doctest::Approx(2.1739e-6).epsilon(1e-4));
    CHECK(pulse.duration * pulse.rabi_frequency == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(transfer_probability(pulse, pulse.duration) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(transfer_probability(pulse, 0.0) == 0.0);

    // Detuned by one Rabi frequency: peak transfer is one half.
    RamanPulse detuned = pulse;
    detuned.two_photon_detuning = 230e3;
    detuned.duration = 10.0 / 230e3;
    const double period = 1.0 / std::sqrt(2.0) / 230e3;
    double peak = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double p = transfer_probability(detuned, i * detuned.duration / 400.0);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        peak = std::max(peak, p);
    }
    CHECK(peak == doctest::Approx(0.5).epsilon(1e-3));
    // Periodicity in the generalized Rabi frequency.
    CHECK(transfer_probability(detuned, 2e-6) ==
          doctest::Approx(transfer_probability(detuned, 2e-6 + period))
              .epsilon(1e-9));

    CHECK_THROWS_AS(transfer_probability(pulse, -1e-9), DomainError);
    CHECK_THROWS_AS(pi_pulse_duration(0.0), DomainError);
}

TEST_CASE("two-path effective Rabi frequency") {
    CHECK(effective_rabi(1e6, 1e6, -100.0, 100.0, -1) ==
          doctest::Approx(0.5 * 1e12 * 2.0 / 100.0).epsilon(1e-12));
    CHECK(effective_rabi(1e6, 1e6, -100.0, 100.0, +1) == 0.0);
    CHECK_THROWS_AS(effective_rabi(1e6, 1e6, 0.0, 100.0, -1), DomainError);
    CHECK_THROWS_AS(effective_rabi(1e6, 1e6, -100.0, 100.0, 2), DomainError);
}

TEST_CASE("coherence figure of merit peaks at half the splitting") {
    const double splitting = 816.0;
    double best_detuning = 0.0;
    double best = -1.0;
    for (double d1 = -815.0; d1 < 0.0; d1 += 1.0) {
        const double v = rabi_per_scattering(1e6, 1e6, d1, splitting, -1);
        if (v > best) {
            best = v;
            best_detuning = d1;
        }
    }
    CHECK(best_detuning == doctest::Approx(-408.0).epsilon(1e-9));
}

TEST_CASE("Ramsey fringe") {
    RamanPulse half;
    half.rabi_frequency = 230e3;
    half.duration = pi_pulse_duration(230e3) / 2.0;  // pi/2 pulse

    CHECK(ramsey_fringe(0.0, 1e-3, half) == doctest::Approx(1.0).epsilon(1e-12));

    // delta * gap = 1/2 sits at a fringe minimum.
    CHECK(ramsey_fringe(250.0, 2e-3, half) < 0.05);

    SUBCASE("fitted fringe frequency equals the programmed detuning") {
        const double delta = 1000.0;
        std::vector<double> gaps, pops;
        for (int i = 0; i <= 1000; ++i) {
            gaps.push_back(10e-3 * i / 1000.0);
            pops.push_back(ramsey_fringe(delta, gaps.back(), half));
        }
        double mean = 0.0;
        for (double p : pops) mean += p;
        mean /= static_cast<double>(pops.size());
        // Projection onto a complex tone, scanned over candidate frequencies.
        double best_f = 0.0, best_amp = -1.0;
        for (double f = 900.0; f <= 1100.0; f += 0.5) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = 0; i < gaps.size(); ++i)
                acc += (pops[i] - mean) *
                       std::polar(1.0, 2.0 * std::numbers::pi * f * gaps[i]);
            if (std::abs(acc) > best_amp) {
                best_amp = std::abs(acc);
                best_f = f;
            }
        }
        CHECK(best_f == doctest::Approx(delta).epsilon(0.01));
    }
}

TEST_CASE("pulses idealized as centered kicks") {
    RamanPulse pulse;
    pulse.rabi_frequency = 230e3;
    pulse.two_photon_detuning = 0.0;
    pulse.duration = pi_pulse_duration(230e3);
    pulse.delta_k = {-2.9e5, 1e4, 0.0};
    pulse.start_time = 10e-6;

    const auto freeze = pulse_to_kicks(pulse, KickDirection::freeze);
    const auto unfreeze = pulse_to_kicks(pulse, KickDirection::unfreeze);

    CHECK(freeze.event.time == doctest::Approx(10e-6 + pulse.duration / 2.0));
    CHECK(freeze.amplitude_scale == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(freeze.event.delta_k.x == pulse.delta_k.x);
    CHECK(unfreeze.event.delta_k.x == -pulse.delta_k.x);
    // Freeze plus unfreeze restores the stored wave vector exactly.
    CHECK((freeze.event.delta_k + unfreeze.event.delta_k).norm() == 0.0);

    // Imperfect transfer reported as a multiplicative loss; two pulses at
    // 0.95 each compound to 0.9025.
    RamanPulse lossy = pulse;
    // Duration trimmed so the transfer probability is 0.95.
    lossy.duration = std::asin(std::sqrt(0.95)) /
                     (std::numbers::pi * pulse.rabi_frequency);
    const auto k1 = pulse_to_kicks(lossy, KickDirection::freeze);
    CHECK(k1.amplitude_scale ==
          doctest::Approx(transfer_probability(lossy, lossy.duration)));
    CHECK(k1.amplitude_scale * k1.amplitude_scale ==
          doctest::Approx(0.9025).epsilon(0.02));
}
