#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dlcz/core.hpp"
#include "dlcz/decay.hpp"
#include "dlcz/montecarlo.hpp"

using namespace dlcz;

namespace {

constexpr double deg = std::numbers::pi / 180.0;

SpeciesParams species() { return SpeciesParams::rb87(); }
CloudParams cloud() { return {13e-6, {1e-3, 1e-3, 1e-3}, 1e8}; }

WaveVector3 spinwave_at(double theta) {
    const double k = 2.0 * std::numbers::pi / species().wavelength_write;
    const WaveVector3 kw = Vec3{1.0, 0.0, 0.0} * k;
    const WaveVector3 kwo = Vec3{std::cos(theta), std::sin(theta), 0.0} * k;
    return spinwave_wavevector(kw, kwo);
}

// Reference implementation: recompute every phase from the raw event list
// with no incremental state, then form the interference sum directly.
double brute_force_efficiency(const AtomEnsemble& ens,
                              const std::vector<KickEvent>& events, double t,
                              const std::optional<ModeWeighting>& mode = {}) {
    WaveVector3 k_net{};
    for (const auto& e : events) k_net += e.delta_k;
    std::complex<double> sum{0.0, 0.0};
    double norm0 = 0.0;
    for (std::size_t j = 0; j < ens.size(); ++j) {
        double phi = 0.0;
        for (const auto& e : events)
            phi += e.delta_k.dot(ens.position_at(j, e.time));
        phi -= k_net.dot(ens.position_at(j, t));
        double w = ens.mode_weights[j];
        double w0 = ens.mode_weights[j];
        if (mode) {
            const Vec3 axis = mode->axis.normalized();
            auto trans_sq = [&](const Vec3& r) {
                const double along = r.dot(axis);
                return std::max(0.0, r.dot(r) - along * along);
            };
            const double w2 = mode->waist * mode->waist;
            const double uc = std::exp(-trans_sq(ens.positions0[j]) / w2);
            w *= uc * std::exp(-2.0 * trans_sq(ens.position_at(j, t)) / w2);
            w0 *= uc * std::exp(-2.0 * trans_sq(ens.positions0[j]) / w2);
        }
        sum += w * std::polar(1.0, phi);
        norm0 += w0;
    }
    return std::norm(sum) / (norm0 * norm0);
}

}  // namespace

TEST_CASE("seed derivation is deterministic and spread out") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("ensemble sampling is reproducible") {
    const auto a = sample_ensemble(500, cloud(), species(), 42);
    const auto b = sample_ensemble(500, cloud(), species(), 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        CHECK(a.positions0[j].x == b.positions0[j].x);
        CHECK(a.positions0[j].y == b.positions0[j].y);
        CHECK(a.positions0[j].z == b.positions0[j].z);
        CHECK(a.velocities[j].x == b.velocities[j].x);
        CHECK(a.phases[j] == 0.0);
        CHECK(a.mode_weights[j] == 1.0);
    }
    CHECK_THROWS_AS(sample_ensemble(1, cloud(), species(), 1), DomainError);
}

TEST_CASE("sampled velocity spread matches the thermal speed") {
    const std::size_t n = 100000;
    const auto ens = sample_ensemble(n, cloud(), species(), 99);
    const double sv = thermal_speed(13e-6, species().mass, SpeedConvention::rms_1d);
    CHECK(sv == doctest::Approx(0.0352660).epsilon(1e-4));
    for (auto axis : {&Vec3::x, &Vec3::y, &Vec3::z}) {
        double ss = 0.0;
        for (const auto& v : ens.velocities) ss += (v.*axis) * (v.*axis);
        const double sample_std = std::sqrt(ss / static_cast<double>(n));
        const double se = sv / std::sqrt(2.0 * static_cast<double>(n));
        CHECK(std::abs(sample_std - sv) < 3.0 * se);
    }
}

TEST_CASE("spin-wave imprint phases") {
    auto ens = sample_ensemble(100, cloud(), species(), 3);
    imprint_spinwave(ens, {0.0, 0.0, 0.0});
    for (double p : ens.phases) CHECK(p == 0.0);

    ens.positions0[0] = {0.0, 0.0, 0.0};
    ens.positions0[1] = {1e-3, 2e-3, 0.0};
    imprint_spinwave(ens, {5e4, 0.0, 0.0});
    CHECK(ens.phases[0] == 0.0);
    CHECK(ens.phases[1] == 5e4 * 1e-3);
}

TEST_CASE("momentum kick bookkeeping") {
    auto ens = sample_ensemble(200, cloud(), species(), 11);
    const WaveVector3 ks = spinwave_at(2.1 * deg);
    imprint_spinwave(ens, ks);

    SUBCASE("zero kick changes nothing") {
        const auto before = ens.phases;
        apply_kick(ens, {10e-6, {0.0, 0.0, 0.0}, "noop"});
        for (std::size_t j = 0; j < ens.size(); ++j)
            CHECK(ens.phases[j] == before[j]);
    }

    SUBCASE("counter-kick at t = 0 cancels every phase exactly") {
        apply_kick(ens, {0.0, -ks, "freeze"});
        for (double p : ens.phases) CHECK(p == 0.0);
        CHECK(ens.net_wavevector.norm() == 0.0);
    }

    SUBCASE("kick and its inverse at equal times are the identity") {
        auto fresh = sample_ensemble(200, cloud(), species(), 11);
        imprint_spinwave(fresh, ks);
        const auto before = fresh.phases;
        const WaveVector3 kick{1e5, -2e4, 3e3};
        apply_kick(fresh, {20e-6, kick, "there"});
        apply_kick(fresh, {20e-6, -kick, "back"});
        for (std::size_t j = 0; j < fresh.size(); ++j)
            CHECK(fresh.phases[j] == doctest::Approx(before[j]).epsilon(1e-12));
    }

    SUBCASE("out-of-order events rejected") {
        apply_kick(ens, {10e-6, -ks, "freeze"});
        CHECK_THROWS_AS(apply_kick(ens, {5e-6, ks, "late"}), SequenceError);
    }
}

TEST_CASE("retrieval efficiency basics") {
    auto ens = sample_ensemble(5000, cloud(), species(), 17);
    const WaveVector3 ks = spinwave_at(2.1 * deg);
    imprint_spinwave(ens, ks);

    CHECK(retrieval_efficiency(ens, 0.0).efficiency == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(retrieval_efficiency(ens, -1e-6), SequenceError);

    // Perfect freeze at t = 0: unity retrieval at any later time.
    apply_kick(ens, {0.0, -ks, "freeze"});
    for (double t : {50e-6, 500e-6, 5e-3})
        CHECK(retrieval_efficiency(ens, t).efficiency ==
              doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("incremental ledger matches the brute-force oracle") {
    auto ens = sample_ensemble(300, cloud(), species(), 23);
    const WaveVector3 ks = spinwave_at(3.0 * deg);
    const WaveVector3 partial = -ks * 0.8;
    std::vector<KickEvent> events{{0.0, ks, "imprint"},
                                  {15e-6, partial, "freeze"},
                                  {90e-6, -partial, "unfreeze"}};
    imprint_spinwave(ens, ks);
    apply_kick(ens, events[1]);
    apply_kick(ens, events[2]);

    const std::optional<ModeWeighting> mode{{90e-6, {1.0, 0.0, 0.0}}};
    for (double t : {90e-6, 150e-6, 400e-6}) {
        CHECK(retrieval_efficiency(ens, t).efficiency ==
              doctest::Approx(brute_force_efficiency(ens, events, t)).epsilon(1e-12));
        CHECK(retrieval_efficiency(ens, t, mode).efficiency ==
              doctest::Approx(brute_force_efficiency(ens, events, t, mode))
                  .epsilon(1e-12));
    }
}

TEST_CASE("unfrozen decay follows the analytic envelope") {
    PulseSequence seq;
    seq.k_s = spinwave_at(2.1 * deg);
    RunConfig cfg;
    cfg.n_atoms = 10000;
    cfg.n_trials = 32;
    cfg.master_seed = 2024;
    cfg.cloud = cloud();
    cfg.species = species();

    const double sv = thermal_speed(13e-6, species().mass, SpeedConvention::rms_1d);
    const double k = seq.k_s.norm();
    const double tau = 1.0 / (k * sv);
    std::vector<double> probes;
    for (int i = 1; i <= 10; ++i) probes.push_back(2.5 * tau * i / 10.0);

    const DecayCurve curve = run_sequence(seq, probes, cfg);
    for (const auto& s : curve.samples) {
        const double expected = std::exp(-(k * sv * s.time) * (k * sv * s.time));
        CHECK(s.sigma > 0.0);
        CHECK(std::abs(s.value - expected) < 3.0 * s.sigma);
        CHECK(s.value >= 0.0);
        CHECK(s.value <= 1.0 + 3.0 * s.sigma);
    }
}

TEST_CASE("run_sequence is deterministic and thread-count independent") {
    PulseSequence seq;
    seq.k_s = spinwave_at(2.1 * deg);
    RunConfig cfg;
    cfg.n_atoms = 1000;
    cfg.n_trials = 8;
    cfg.master_seed = 5;
    cfg.cloud = cloud();
    cfg.species = species();
    const std::vector<double> probes{20e-6, 60e-6, 120e-6};

    cfg.threads = 1;
    const auto a = run_sequence(seq, probes, cfg);
    cfg.threads = 4;
    const auto b = run_sequence(seq, probes, cfg);
    const auto c = run_sequence(seq, probes, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].value == b.samples[i].value);
        CHECK(a.samples[i].sigma == b.samples[i].sigma);
        CHECK(b.samples[i].value == c.samples[i].value);
    }
}

TEST_CASE("trial spread shrinks as one over root trials") {
    PulseSequence seq;
    seq.k_s = spinwave_at(2.1 * deg);
    RunConfig cfg;
    cfg.n_atoms = 2000;
    cfg.master_seed = 77;
    cfg.cloud = cloud();
    cfg.species = species();
    std::vector<double> probes;
    for (int i = 1; i <= 8; ++i) probes.push_back(30e-6 * i);

    auto mean_sigma = [&](std::size_t trials) {
        cfg.n_trials = trials;
        const auto curve = run_sequence(seq, probes, cfg);
        double s = 0.0;
        for (const auto& p : curve.samples) s += p.sigma;
        return s / static_cast<double>(curve.samples.size());
    };
    const double s8 = mean_sigma(8);
    const double s128 = mean_sigma(128);
    CHECK(s8 / s128 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("mode weighting alone decays monotonically") {
    PulseSequence seq;
    seq.k_s = {0.0, 0.0, 0.0};  // no phases, expansion only
    RunConfig cfg;
    cfg.n_atoms = 20000;
    cfg.n_trials = 4;
    cfg.master_seed = 9;
    cfg.cloud = cloud();
    cfg.species = species();
    cfg.mode = ModeWeighting{90e-6, {1.0, 0.0, 0.0}};
    std::vector<double> probes;
    for (int i = 1; i <= 12; ++i) probes.push_back(0.4e-3 * i);

    const auto curve = run_sequence(seq, probes, cfg);
    double prev = 1.0;
    for (const auto& s : curve.samples) {
        CHECK(s.value <= prev + 3.0 * s.sigma);
        prev = s.value;
    }
    CHECK(curve.samples.back().value < 0.2);
}

TEST_CASE("mode-weighted expansion matches its closed-form average") {
    // With creation amplitude exp(-rho0^2/w^2) and retrieval intensity
    // exp(-2 rho(t)^2/w^2), a thermal average over a wide cloud gives
    // eta(t) = (1 + (4/3)(sigma_v t / w)^2)^-2.
    PulseSequence seq;
    seq.k_s = {0.0, 0.0, 0.0};
    RunConfig cfg;
    cfg.n_atoms = 40000;
    cfg.n_trials = 16;
    cfg.master_seed = 31;
    cfg.cloud = cloud();
    cfg.species = species();
    const double w = 90e-6;
    cfg.mode = ModeWeighting{w, {1.0, 0.0, 0.0}};
    const double sv = thermal_speed(13e-6, species().mass, SpeedConvention::rms_1d);
    const std::vector<double> probes{0.5e-3, 1.0e-3, 1.8e-3, 3.0e-3};

    const auto curve = run_sequence(seq, probes, cfg);
    for (const auto& s : curve.samples) {
        const double x = sv * s.time / w;
        const double expected = std::pow(1.0 + (4.0 / 3.0) * x * x, -2.0);
        CHECK(std::abs(s.value - expected) < 4.0 * s.sigma + 0.01);
    }
}

TEST_CASE("storage simulation with freeze and unfreeze kicks") {
    StoragePlan plan;
    plan.k_s = spinwave_at(2.1 * deg);
    plan.freezing = true;
    plan.freeze_kick = -plan.k_s;
    RunConfig cfg;
    cfg.n_atoms = 4000;
    cfg.n_trials = 8;
    cfg.master_seed = 13;
    cfg.cloud = cloud();
    cfg.species = species();

    // Probe long after the unfrozen lifetime: the frozen interval preserves
    // the spin wave, only the 2 us of unfrozen time dephases.
    const auto curve = simulate_storage(plan, {200e-6, 500e-6, 1e-3}, cfg);
    for (const auto& s : curve.samples) CHECK(s.value > 0.99);

    CHECK_THROWS_AS(simulate_storage(plan, {1.5e-6}, cfg), SequenceError);
}

TEST_CASE("gradient dephasing matches the stationary-cloud average") {
    // The per-atom phase 2 pi G z t over a Gaussian cloud multiplies the
    // retrieval efficiency by exp(-(2 pi G sigma t)^2), the square of the
    // ensemble coherence envelope.
    StoragePlan plan;
    plan.k_s = spinwave_at(1.25 * deg);
    plan.gradient_mhz_per_m = 2e-3;
    plan.stored_pair_clock = false;
    RunConfig cfg;
    cfg.n_atoms = 20000;
    cfg.n_trials = 16;
    cfg.master_seed = 41;
    cfg.cloud = cloud();
    cfg.species = species();

    const double sv = thermal_speed(13e-6, species().mass, SpeedConvention::rms_1d);
    const double k = plan.k_s.norm();
    const auto curve = simulate_storage(plan, {40e-6, 80e-6, 120e-6}, cfg);
    for (const auto& s : curve.samples) {
        const double motional = std::exp(-(k * sv * s.time) * (k * sv * s.time));
        const double coherence =
            magnetic_envelope(s.time, plan.gradient_mhz_per_m, 1e-3,
                              StatePair::non_clock);
        const double expected = motional * coherence * coherence;
        CHECK(std::abs(s.value - expected) < 4.0 * s.sigma + 0.005);
    }

    // The clock pair is only field-sensitive around the pulse pair.
    StoragePlan clock = plan;
    clock.freezing = true;
    clock.freeze_kick = -plan.k_s;
    clock.stored_pair_clock = true;
    const auto frozen = simulate_storage(clock, {500e-6, 2e-3}, cfg);
    for (const auto& s : frozen.samples) CHECK(s.value > 0.99);
}
