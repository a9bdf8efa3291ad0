#ifndef DLCZ_PHOTON_HPP
#define DLCZ_PHOTON_HPP

#include <cstdint>
#include <vector>

#include "dlcz/decay.hpp"
#include "dlcz/montecarlo.hpp"

namespace dlcz {

struct DetectionParams {
    double chi = 0.0038;     // excitation probability per write pulse
    double eta_wo = 1.0;     // write-out path + detector efficiency
    double eta_ro = 1.0;     // read-out path + detector efficiency
    double bg_wo = 0.0;      // background probability per write-out gate
    double bg_ro = 0.0256117647058823529;  // background per read-out gate
    bool chi_warning_emitted = false;

    void validate();
    // Defaults calibrated so that g2(0) = 35 without freezing at
    // p_wo = 0.38%; stated as calibration, not prediction.
    static DetectionParams calibrated();
};

struct CorrelationPoint {
    double time = 0.0;
    double g2 = 0.0;
    double g2_err = 0.0;
};

struct DlczProbabilities {
    double p_wo = 0.0;
    double p_ro = 0.0;
    double p_joint = 0.0;
};

// g2 = p_joint / (p_wo p_ro), no clamping.
double g2_from_probs(double p_wo, double p_ro, double p_joint);

inline constexpr double g2_nonclassical_bound = 2.0;
inline bool nonclassical(double g2) { return g2 > g2_nonclassical_bound; }

// Linearized DLCZ emission model. Leading-order pair emission plus
// accidental coincidences with the backgrounds; zero-background limit
// gives g2 = 1/chi + 1.
DlczProbabilities dlcz_probabilities(const DetectionParams& params,
                                     double eta_retrieval);

// g2(t) from a retrieval-efficiency curve eta_ret(t) = eta0 * envelope(t).
std::vector<CorrelationPoint> g2_curve(const DecayEnvelope& envelope,
                                       const std::vector<double>& times,
                                       const DetectionParams& params,
                                       double eta0 = 1.0);
std::vector<CorrelationPoint> g2_curve(const DecayCurve& efficiency,
                                       const DetectionParams& params,
                                       double eta0 = 1.0);

// V ~ (g2-1)/(g2+1)
double visibility(double g2);

// F ~ (g2-0.5)/(g2+1) = (1+3V)/4
double fidelity(double g2);

struct CountRecord {
    std::uint64_t n_wo = 0;
    std::uint64_t n_ro = 0;
    std::uint64_t n_joint = 0;
    std::uint64_t n_trials = 0;
};

struct G2WithError {
    double g2 = 0.0;
    double g2_err = 0.0;
};

// g2 from count ratios with first-order propagation of independent
// Poisson errors.
G2WithError poisson_g2_error(const CountRecord& counts);

// Expected g2 error bar at the given probabilities and trial count.
double expected_g2_error(const DlczProbabilities& probs, double n_trials);

}  // namespace dlcz

#endif
