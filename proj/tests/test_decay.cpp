#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dlcz/core.hpp"
#include "dlcz/decay.hpp"

using namespace dlcz;

TEST_CASE("motional lifetime") {
    const auto tau = motional_lifetime(2.9514e5, 0.0352660);
    REQUIRE(tau.has_value());
    CHECK(*tau == doctest::Approx(96.08e-6).epsilon(1e-3));

    // Reciprocal scaling: doubling k halves tau.
    const auto tau2 = motional_lifetime(2.0 * 2.9514e5, 0.0352660);
    CHECK(*tau2 == doctest::Approx(*tau / 2.0).epsilon(1e-12));

    // Paper speed convention at 2.1 degrees.
    const auto tau_p = motional_lifetime(2.9514e5, 0.0441993);
    CHECK(*tau_p == doctest::Approx(76.66e-6).epsilon(1e-3));

    // Frozen spin wave has no finite lifetime.
    CHECK_FALSE(motional_lifetime(0.0, 0.0352660).has_value());
    CHECK_THROWS_AS(motional_lifetime(-1.0, 0.035), DomainError);
    CHECK_THROWS_AS(motional_lifetime(1e5, 0.0), DomainError);
}

TEST_CASE("motional envelope") {
    CHECK(motional_envelope(0.0, 123e-6) == 1.0);
    CHECK(motional_envelope(123e-6, 123e-6) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(motional_envelope(-1e-6, 123e-6), DomainError);
    CHECK_THROWS_AS(motional_envelope(1e-6, 0.0), DomainError);
}

TEST_CASE("expansion model") {
    CHECK(expansion_lifetime(90e-6, 0.0352660) ==
          doctest::Approx(1.8046e-3).epsilon(1e-3));
    CHECK(expansion_lifetime(180e-6, 0.0352660) ==
          doctest::Approx(2.0 * expansion_lifetime(90e-6, 0.0352660)).epsilon(1e-12));
    CHECK(expansion_envelope(0.0, 90e-6, 0.0352660) == 1.0);
    const double tau = expansion_lifetime(90e-6, 0.0352660);
    CHECK(expansion_envelope(tau, 90e-6, 0.0352660) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("magnetic envelope") {
    for (double t : {0.0, 1e-4, 1e-3, 1e-2}) {
        CHECK(magnetic_envelope(t, 5.0, 1e-3, StatePair::clock) == 1.0);
        CHECK(magnetic_envelope(t, 0.0, 1e-3, StatePair::non_clock) == 1.0);
    }
    // G = 0.01 MHz/m, sigma = 1 mm, t = 1 ms.
    CHECK(magnetic_envelope(1e-3, 0.01, 1e-3, StatePair::non_clock) ==
          doctest::Approx(0.9980281).epsilon(1e-6));
    CHECK_THROWS_AS(magnetic_envelope(1e-3, -1.0, 1e-3, StatePair::non_clock),
                    DomainError);
}

TEST_CASE("envelopes are normalized and non-increasing") {
    const std::vector<DecayEnvelope> all = {
        DecayEnvelope::motional(123e-6),
        DecayEnvelope::expansion(90e-6, 0.0352660),
        DecayEnvelope::magnetic(0.5, 1e-3, StatePair::non_clock),
        DecayEnvelope::flat(),
    };
    for (const auto& env : all) {
        CHECK(env(0.0) == 1.0);
        double prev = 1.0;
        for (int i = 1; i <= 200; ++i) {
            const double v = env(i * 25e-6);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("composite envelope algebra") {
    const auto m1 = DecayEnvelope::motional(123e-6);
    const auto single = composite_envelope({m1});
    for (double t : {0.0, 50e-6, 123e-6, 400e-6}) CHECK(single(t) == m1(t));

    // Product of Gaussians is Gaussian with inverse-square-summed lifetime.
    const double tau1 = 123e-6, tau2 = 80e-6;
    const double tau12 = 1.0 / std::sqrt(1.0 / (tau1 * tau1) + 1.0 / (tau2 * tau2));
    const auto prod =
        composite_envelope({DecayEnvelope::motional(tau1), DecayEnvelope::motional(tau2)});
    const auto ref = DecayEnvelope::motional(tau12);
    for (int i = 0; i <= 50; ++i) {
        const double t = i * 10e-6;
        CHECK(prod(t) == doctest::Approx(ref(t)).epsilon(1e-12));
    }

    // Frozen motional times expansion is expansion alone.
    const auto exp_env = DecayEnvelope::expansion(90e-6, 0.0352660);
    const auto froz = composite_envelope({DecayEnvelope::flat(), exp_env});
    for (double t : {0.0, 1e-3, 2e-3}) CHECK(froz(t) == exp_env(t));

    CHECK_THROWS_AS(composite_envelope({}), DomainError);
}
