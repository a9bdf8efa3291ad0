#ifndef DLCZ_MONTECARLO_HPP
#define DLCZ_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dlcz/core.hpp"

namespace dlcz {

struct KickEvent {
    double time = 0.0;  // s
    WaveVector3 delta_k;
    std::string label;
};

// One Monte Carlo trial: sampled atoms plus the running phase ledger.
// Reconstructible bit-exactly from (seed, CloudParams, n, mode filter).
struct AtomEnsemble {
    std::vector<Vec3> positions0;   // m, at t = 0
    std::vector<Vec3> velocities;   // m/s
    std::vector<double> phases;     // rad, sum of imprint/kick phases
    std::vector<double> mode_weights;
    std::uint64_t rng_seed = 0;
    WaveVector3 net_wavevector;     // running sum of imprint and kicks
    double last_event_time = 0.0;
    Vec3 acceleration;              // 0 unless gravity enabled

    std::size_t size() const { return positions0.size(); }
    Vec3 position_at(std::size_t j, double t) const {
        return positions0[j] + velocities[j] * t + acceleration * (0.5 * t * t);
    }
};

struct EfficiencySample {
    double time = 0.0;
    double efficiency = 0.0;
    double std_error = 0.0;
};

struct CurveSample {
    double time = 0.0;   // s
    double value = 0.0;
    double sigma = 0.0;
};

struct DecayCurve {
    std::vector<CurveSample> samples;
    std::string label;
    std::string meta;  // config fingerprint
};

// Gaussian transverse mode filter applied at creation and retrieval.
struct ModeWeighting {
    double waist;          // m, 1/e^2 intensity radius
    Vec3 axis = {1.0, 0.0, 0.0};  // mode axis through the origin
};

// Counter-based per-trial seed derivation (splitmix64 over master ^ index),
// order-independent under parallel execution.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// When a mode filter is given and the cloud is much wider than the waist,
// positions transverse to the mode axis are drawn from a narrower proposal
// and the density ratio is folded into mode_weights, so the estimator is
// unchanged but the effective sample actually overlaps the mode.
AtomEnsemble sample_ensemble(std::size_t n, const CloudParams& cloud,
                             const SpeciesParams& species, std::uint64_t seed,
                             const std::optional<ModeWeighting>& mode = {});

// phases_j += k_s . r_j(0)
void imprint_spinwave(AtomEnsemble& ensemble, const WaveVector3& k_s);

// phases_j += delta_k . r_j(t_event); events must be time-ordered
void apply_kick(AtomEnsemble& ensemble, const KickEvent& event);

// Optional per-atom extra phase (e.g. magnetic dephasing), indexed by atom.
using ExtraPhaseFn = std::function<double(std::size_t)>;

// eta(t) = |sum_j w_j exp(i phi_j(t))|^2 / (sum_j w_j(0))^2 with
// phi_j(t) = accumulated event phases - k_net . r_j(t) + extra phase.
EfficiencySample retrieval_efficiency(const AtomEnsemble& ensemble, double t,
                                      const std::optional<ModeWeighting>& mode = {},
                                      const ExtraPhaseFn& extra_phase = {});

struct PulseSequence {
    WaveVector3 k_s;               // imprinted at t = 0
    std::vector<KickEvent> kicks;  // time-ordered

    void validate() const;
};

struct RunConfig {
    std::size_t n_atoms = 10000;
    std::size_t n_trials = 32;
    std::uint64_t master_seed = 1;
    CloudParams cloud;
    SpeciesParams species;
    std::optional<ModeWeighting> mode;
    bool gravity = false;
    int threads = 0;  // 0: use DLCZ_THREADS env var or hardware default
};

// Fresh ensembles per trial (seeds derived from the master seed), imprint
// and kicks applied, efficiency recorded at each probe time. Deterministic
// for a fixed master seed regardless of worker count.
DecayCurve run_sequence(const PulseSequence& sequence,
                        const std::vector<double>& probe_times,
                        const RunConfig& config);

// Full storage experiment: imprint, optional freeze/unfreeze kick pair
// rebuilt per probe time (the unfreeze pulse fires just before each probe),
// optional magnetic dephasing of the active state pair.
struct StoragePlan {
    WaveVector3 k_s;
    bool freezing = false;
    WaveVector3 freeze_kick;        // from the geometry solver, ~ -k_s
    double freeze_time = 1e-6;      // s, first pulse center
    double unfreeze_lead = 1e-6;    // s, unfreeze fires this long before probe
    double gradient_mhz_per_m = 0.0;
    Vec3 gradient_axis = {0.0, 0.0, 1.0};
    bool stored_pair_clock = false; // pair used during the frozen interval
};

DecayCurve simulate_storage(const StoragePlan& plan,
                            const std::vector<double>& probe_times,
                            const RunConfig& config);

}  // namespace dlcz

#endif
