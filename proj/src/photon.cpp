#include "dlcz/photon.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace dlcz {

void DetectionParams::validate() {
    for (double v : {chi, eta_wo, eta_ro, bg_wo, bg_ro}) {
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("DetectionParams: all parameters must be in [0,1]");
    }
    if (chi > 0.1 && !chi_warning_emitted) {
        std::cerr << "warning: chi = " << chi
                  << " is outside the weak-excitation regime (chi << 1)\n";
        chi_warning_emitted = true;
    }
}

DetectionParams DetectionParams::calibrated() { return DetectionParams{}; }

double g2_from_probs(double p_wo, double p_ro, double p_joint) {
    if (!(p_wo > 0.0) || !(p_ro > 0.0))
        throw DomainError("g2_from_probs: marginal probabilities must be positive");
    if (p_joint < 0.0)
        throw DomainError("g2_from_probs: joint probability must be >= 0");
    return p_joint / (p_wo * p_ro);
}

DlczProbabilities dlcz_probabilities(const DetectionParams& params,
                                     double eta_retrieval) {
    DetectionParams p = params;
    p.validate();
    if (!(eta_retrieval >= 0.0 && eta_retrieval <= 1.0))
        throw DomainError("dlcz_probabilities: eta_retrieval must be in [0,1]");
    DlczProbabilities out;
    out.p_wo = p.chi * p.eta_wo + p.bg_wo;
    out.p_ro = p.chi * eta_retrieval * p.eta_ro + p.bg_ro;
    // Pair term carries the (1+chi) two-mode-squeezing enhancement;
    // accidentals pair each marginal with the other channel's background.
    out.p_joint = p.chi * (1.0 + p.chi) * p.eta_wo * eta_retrieval * p.eta_ro +
                  out.p_wo * p.bg_ro +
                  p.bg_wo * p.chi * eta_retrieval * p.eta_ro;
    if (out.p_wo > 1.0 || out.p_ro > 1.0 || out.p_joint > 1.0)
        throw DomainError("dlcz_probabilities: probability exceeds 1");
    return out;
}

std::vector<CorrelationPoint> g2_curve(const DecayEnvelope& envelope,
                                       const std::vector<double>& times,
                                       const DetectionParams& params,
                                       double eta0) {
    std::vector<CorrelationPoint> out;
    out.reserve(times.size());
    for (double t : times) {
        const auto probs = dlcz_probabilities(params, eta0 * envelope(t));
        out.push_back({t, g2_from_probs(probs.p_wo, probs.p_ro, probs.p_joint), 0.0});
    }
    return out;
}

std::vector<CorrelationPoint> g2_curve(const DecayCurve& efficiency,
                                       const DetectionParams& params,
                                       double eta0) {
    std::vector<CorrelationPoint> out;
    out.reserve(efficiency.samples.size());
    for (const auto& s : efficiency.samples) {
        const double eta = std::clamp(eta0 * s.value, 0.0, 1.0);
        const auto probs = dlcz_probabilities(params, eta);
        out.push_back({s.time, g2_from_probs(probs.p_wo, probs.p_ro, probs.p_joint),
                       0.0});
    }
    return out;
}

double visibility(double g2) {
    if (!(g2 >= 0.0)) throw DomainError("visibility: g2 must be >= 0");
    return (g2 - 1.0) / (g2 + 1.0);
}

double fidelity(double g2) {
    if (!(g2 >= 0.0)) throw DomainError("fidelity: g2 must be >= 0");
    return (g2 - 0.5) / (g2 + 1.0);
}

G2WithError poisson_g2_error(const CountRecord& counts) {
    if (counts.n_trials == 0)
        throw DomainError("poisson_g2_error: n_trials must be positive");
    if (counts.n_wo == 0 || counts.n_ro == 0)
        throw DomainError("poisson_g2_error: zero marginal counts");
    const double nw = static_cast<double>(counts.n_wo);
    const double nr = static_cast<double>(counts.n_ro);
    const double nj = static_cast<double>(counts.n_joint);
    const double nt = static_cast<double>(counts.n_trials);
    const double g2 = nj * nt / (nw * nr);
    G2WithError out;
    out.g2 = g2;
    if (counts.n_joint == 0) {
        // Bound from a single joint count.
        out.g2_err = nt / (nw * nr);
        return out;
    }
    out.g2_err = g2 * std::sqrt(1.0 / nj + 1.0 / nw + 1.0 / nr);
    return out;
}

double expected_g2_error(const DlczProbabilities& probs, double n_trials) {
    if (!(n_trials > 0.0))
        throw DomainError("expected_g2_error: n_trials must be positive");
    const double nw = probs.p_wo * n_trials;
    const double nr = probs.p_ro * n_trials;
    const double nj = probs.p_joint * n_trials;
    if (!(nw > 0.0 && nr > 0.0 && nj > 0.0))
        throw DomainError("expected_g2_error: expected counts must be positive");
    const double g2 = g2_from_probs(probs.p_wo, probs.p_ro, probs.p_joint);
    return g2 * std::sqrt(1.0 / nj + 1.0 / nw + 1.0 / nr);
}

}  // namespace dlcz
