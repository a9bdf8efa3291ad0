#include "dlcz/decay.hpp"

#include <numbers>

namespace dlcz {

std::optional<double> motional_lifetime(double k_s_mag, double v) {
    if (k_s_mag < 0.0 || !(v > 0.0))
        throw DomainError("motional_lifetime: need k_s_mag >= 0 and v > 0");
    if (k_s_mag == 0.0) return std::nullopt;  // frozen: infinite lifetime
    return 1.0 / (k_s_mag * v);
}

double motional_envelope(double t, double tau) {
    if (!(t >= 0.0)) throw DomainError("motional_envelope: t must be >= 0");
    if (!(tau > 0.0)) throw DomainError("motional_envelope: tau must be positive");
    const double u = t / tau;
    return std::exp(-u * u);
}

double expansion_lifetime(double waist, double sigma_v) {
    if (!(waist > 0.0) || !(sigma_v > 0.0))
        throw DomainError("expansion_lifetime: waist and sigma_v must be positive");
    return waist / (std::numbers::sqrt2 * sigma_v);
}

double expansion_envelope(double t, double waist, double sigma_v) {
    return motional_envelope(t, expansion_lifetime(waist, sigma_v));
}

double magnetic_envelope(double t, double differential_shift_gradient_mhz_per_m,
                         double cloud_sigma, StatePair pair) {
    if (!(t >= 0.0)) throw DomainError("magnetic_envelope: t must be >= 0");
    if (differential_shift_gradient_mhz_per_m < 0.0 || cloud_sigma < 0.0)
        throw DomainError("magnetic_envelope: gradient and sigma must be >= 0");
    if (pair == StatePair::clock) return 1.0;
    const double g_hz_per_m = differential_shift_gradient_mhz_per_m * 1e6;
    const double w = 2.0 * std::numbers::pi * g_hz_per_m * cloud_sigma * t;
    return std::exp(-0.5 * w * w);
}

DecayEnvelope DecayEnvelope::motional(double tau) {
    if (!(tau > 0.0)) throw DomainError("DecayEnvelope::motional: tau must be positive");
    DecayEnvelope e;
    e.kind_ = EnvelopeKind::motional_gaussian;
    e.a_ = tau;
    return e;
}

DecayEnvelope DecayEnvelope::expansion(double waist, double sigma_v) {
    DecayEnvelope e;
    e.kind_ = EnvelopeKind::expansion;
    e.a_ = expansion_lifetime(waist, sigma_v);
    return e;
}

DecayEnvelope DecayEnvelope::magnetic(double gradient_mhz_per_m, double cloud_sigma,
                                      StatePair pair) {
    if (gradient_mhz_per_m < 0.0 || cloud_sigma < 0.0)
        throw DomainError("DecayEnvelope::magnetic: gradient and sigma must be >= 0");
    DecayEnvelope e;
    e.kind_ = EnvelopeKind::magnetic_gradient;
    e.a_ = gradient_mhz_per_m;
    e.b_ = cloud_sigma;
    e.pair_ = pair;
    return e;
}

DecayEnvelope DecayEnvelope::flat() {
    // A frozen (infinite-lifetime) motional envelope: identically 1.
    DecayEnvelope e;
    e.kind_ = EnvelopeKind::composite;
    return e;
}

DecayEnvelope DecayEnvelope::composite(const std::vector<DecayEnvelope>& members) {
    DecayEnvelope e;
    e.kind_ = EnvelopeKind::composite;
    e.members_ = members;
    return e;
}

double DecayEnvelope::operator()(double t) const {
    switch (kind_) {
        case EnvelopeKind::motional_gaussian:
        case EnvelopeKind::expansion:
            return motional_envelope(t, a_);
        case EnvelopeKind::magnetic_gradient:
            return magnetic_envelope(t, a_, b_, pair_);
        case EnvelopeKind::composite: {
            double v = 1.0;
            for (const auto& m : members_) v *= m(t);
            return v;
        }
    }
    return 1.0;
}

DecayEnvelope composite_envelope(const std::vector<DecayEnvelope>& envelopes) {
    if (envelopes.empty())
        throw DomainError("composite_envelope: empty envelope list");
    return DecayEnvelope::composite(envelopes);
}

}  // namespace dlcz
