#ifndef DLCZ_DECAY_HPP
#define DLCZ_DECAY_HPP

#include <optional>
#include <vector>

#include "dlcz/core.hpp"

namespace dlcz {

// 1/e lifetime from motional dephasing, tau = 1/(k_s v).
// k_s_mag == 0 means the spin wave is frozen: no finite lifetime exists,
// reported as an empty optional rather than a number.
std::optional<double> motional_lifetime(double k_s_mag, double v);

// exp(-t^2/tau^2)
double motional_envelope(double t, double tau);

// Gaussian expansion model referenced to the detection-mode waist,
// tau_exp = waist / (sqrt(2) sigma_v).
double expansion_envelope(double t, double waist, double sigma_v);
double expansion_lifetime(double waist, double sigma_v);

enum class StatePair { clock, non_clock };

// Stationary-atom magnetic dephasing over a Gaussian cloud:
// exp(-(2 pi G sigma t)^2 / 2), gradient G in MHz/m converted internally.
double magnetic_envelope(double t, double differential_shift_gradient_mhz_per_m,
                         double cloud_sigma, StatePair pair);

enum class EnvelopeKind { motional_gaussian, expansion, magnetic_gradient, composite };

// A normalized decoherence envelope: value 1 at t = 0, non-increasing.
class DecayEnvelope {
public:
    static DecayEnvelope motional(double tau);
    static DecayEnvelope expansion(double waist, double sigma_v);
    static DecayEnvelope magnetic(double gradient_mhz_per_m, double cloud_sigma,
                                  StatePair pair);
    static DecayEnvelope flat();  // frozen limit
    static DecayEnvelope composite(const std::vector<DecayEnvelope>& members);

    double operator()(double t) const;
    EnvelopeKind kind() const { return kind_; }

private:
    EnvelopeKind kind_ = EnvelopeKind::composite;
    double a_ = 0.0;  // primary parameter (tau, waist, gradient)
    double b_ = 0.0;  // secondary parameter (sigma_v, cloud sigma)
    StatePair pair_ = StatePair::non_clock;
    std::vector<DecayEnvelope> members_;
};

DecayEnvelope composite_envelope(const std::vector<DecayEnvelope>& envelopes);

}  // namespace dlcz

#endif
