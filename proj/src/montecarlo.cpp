#include "dlcz/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <numbers>
#include <thread>

namespace dlcz {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d4d049bb133111ull;
    return x ^ (x >> 31);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DLCZ_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Run fn(trial) for all trials on the resolved worker count. Each trial
// owns its output slot, so the reduction is order-independent.
void for_each_trial(std::size_t n_trials, int threads,
                    const std::function<void(std::size_t)>& fn) {
    const int nw = std::min<int>(resolve_threads(threads),
                                 static_cast<int>(n_trials));
    if (nw <= 1) {
        for (std::size_t i = 0; i < n_trials; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n_trials; i += nw) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

double transverse_dist_sq(const Vec3& r, const Vec3& axis) {
    const double along = r.dot(axis);
    return std::max(0.0, r.dot(r) - along * along);
}

// Mode filter: field amplitude of the detection mode at creation,
// intensity overlap at retrieval. waist is the 1/e^2 intensity radius.
double creation_weight(const Vec3& r0, const ModeWeighting& mode) {
    return std::exp(-transverse_dist_sq(r0, mode.axis) /
                    (mode.waist * mode.waist));
}

double probe_weight(const Vec3& rt, const ModeWeighting& mode) {
    return std::exp(-2.0 * transverse_dist_sq(rt, mode.axis) /
                    (mode.waist * mode.waist));
}

struct CurveAccumulator {
    // eta[point][trial]
    std::vector<std::vector<double>> eta;

    CurveAccumulator(std::size_t n_points, std::size_t n_trials)
        : eta(n_points, std::vector<double>(n_trials, 0.0)) {}

    DecayCurve reduce(const std::vector<double>& probe_times,
                      std::string label) const {
        DecayCurve curve;
        curve.label = std::move(label);
        const std::size_t n_trials = eta.empty() ? 0 : eta.front().size();
        for (std::size_t p = 0; p < eta.size(); ++p) {
            double mean = 0.0;
            for (double v : eta[p]) mean += v;
            mean /= static_cast<double>(n_trials);
            double var = 0.0;
            for (double v : eta[p]) var += (v - mean) * (v - mean);
            double se = 0.0;
            if (n_trials > 1) {
                var /= static_cast<double>(n_trials - 1);
                se = std::sqrt(var / static_cast<double>(n_trials));
            }
            curve.samples.push_back({probe_times[p], mean, se});
        }
        return curve;
    }
};

void check_ascending(const std::vector<double>& probe_times) {
    for (std::size_t i = 1; i < probe_times.size(); ++i) {
        if (!(probe_times[i] > probe_times[i - 1]))
            throw SequenceError("probe times must be strictly increasing");
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ splitmix64(index));
}

AtomEnsemble sample_ensemble(std::size_t n, const CloudParams& cloud,
                             const SpeciesParams& species, std::uint64_t seed,
                             const std::optional<ModeWeighting>& mode) {
    if (n < 2) throw DomainError("sample_ensemble: need at least 2 atoms");
    cloud.validate();
    species.validate();
    AtomEnsemble ens;
    ens.rng_seed = seed;
    ens.positions0.resize(n);
    ens.velocities.resize(n);
    ens.phases.assign(n, 0.0);
    ens.mode_weights.assign(n, 1.0);

    // Proposal widths: axes mostly transverse to the mode are narrowed to a
    // few waists; the density ratio goes into mode_weights below.
    const double cloud_sigma[3] = {cloud.sigma_r.x, cloud.sigma_r.y,
                                   cloud.sigma_r.z};
    double draw_sigma[3] = {cloud_sigma[0], cloud_sigma[1], cloud_sigma[2]};
    if (mode) {
        const Vec3 axis = mode->axis.normalized();
        const double axis_comp[3] = {axis.x, axis.y, axis.z};
        const double cap = 1.5 * mode->waist;
        for (int i = 0; i < 3; ++i) {
            const double transverse =
                std::sqrt(std::max(0.0, 1.0 - axis_comp[i] * axis_comp[i]));
            if (transverse > 0.5) draw_sigma[i] = std::min(cloud_sigma[i], cap);
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sv = std::sqrt(constants::k_B * cloud.temperature / species.mass);
    for (std::size_t j = 0; j < n; ++j) {
        double r[3];
        double weight = 1.0;
        for (int i = 0; i < 3; ++i) {
            r[i] = gauss(rng) * draw_sigma[i];
            if (draw_sigma[i] != cloud_sigma[i]) {
                const double s2c = cloud_sigma[i] * cloud_sigma[i];
                const double s2d = draw_sigma[i] * draw_sigma[i];
                weight *= (draw_sigma[i] / cloud_sigma[i]) *
                          std::exp(0.5 * r[i] * r[i] * (1.0 / s2d - 1.0 / s2c));
            }
        }
        ens.positions0[j] = {r[0], r[1], r[2]};
        ens.mode_weights[j] = weight;
        ens.velocities[j] = {gauss(rng) * sv, gauss(rng) * sv, gauss(rng) * sv};
    }
    return ens;
}

void imprint_spinwave(AtomEnsemble& ensemble, const WaveVector3& k_s) {
    if (!k_s.finite()) throw DomainError("imprint_spinwave: non-finite k_s");
    for (std::size_t j = 0; j < ensemble.size(); ++j)
        ensemble.phases[j] += k_s.dot(ensemble.positions0[j]);
    ensemble.net_wavevector += k_s;
    ensemble.last_event_time = 0.0;
}

void apply_kick(AtomEnsemble& ensemble, const KickEvent& event) {
    if (event.time < ensemble.last_event_time)
        throw SequenceError("apply_kick: out-of-order event '" + event.label + "'");
    for (std::size_t j = 0; j < ensemble.size(); ++j)
        ensemble.phases[j] += event.delta_k.dot(ensemble.position_at(j, event.time));
    ensemble.net_wavevector += event.delta_k;
    ensemble.last_event_time = event.time;
}

EfficiencySample retrieval_efficiency(const AtomEnsemble& ensemble, double t,
                                      const std::optional<ModeWeighting>& mode,
                                      const ExtraPhaseFn& extra_phase) {
    if (t < ensemble.last_event_time)
        throw SequenceError("retrieval_efficiency: probe before last event");
    const WaveVector3 k_net = ensemble.net_wavevector;
    std::complex<double> sum{0.0, 0.0};
    double norm0 = 0.0;
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
        const Vec3 rt = ensemble.position_at(j, t);
        double phi = ensemble.phases[j] - k_net.dot(rt);
        if (extra_phase) phi += extra_phase(j);
        double w = ensemble.mode_weights[j];
        double w0 = ensemble.mode_weights[j];
        if (mode) {
            const double uc = creation_weight(ensemble.positions0[j], *mode);
            w *= uc * probe_weight(rt, *mode);
            w0 *= uc * probe_weight(ensemble.positions0[j], *mode);
        }
        sum += w * std::complex<double>(std::cos(phi), std::sin(phi));
        norm0 += w0;
    }
    EfficiencySample out;
    out.time = t;
    out.efficiency = std::norm(sum) / (norm0 * norm0);
    out.std_error = 0.0;  // single trial; errors come from trial spread
    return out;
}

void PulseSequence::validate() const {
    double last = 0.0;
    for (const auto& k : kicks) {
        if (k.time < last)
            throw SequenceError("PulseSequence: kicks must be time-ordered");
        if (!k.delta_k.finite())
            throw SequenceError("PulseSequence: non-finite kick");
        last = k.time;
    }
}

DecayCurve run_sequence(const PulseSequence& sequence,
                        const std::vector<double>& probe_times,
                        const RunConfig& config) {
    sequence.validate();
    check_ascending(probe_times);
    if (config.n_trials == 0) throw DomainError("run_sequence: need trials >= 1");

    CurveAccumulator acc(probe_times.size(), config.n_trials);
    for_each_trial(config.n_trials, config.threads, [&](std::size_t trial) {
        AtomEnsemble ens = sample_ensemble(
            config.n_atoms, config.cloud, config.species,
            derive_seed(config.master_seed, trial), config.mode);
        if (config.gravity) ens.acceleration = {0.0, 0.0, -constants::g_earth};
        imprint_spinwave(ens, sequence.k_s);
        std::size_t next_kick = 0;
        for (std::size_t p = 0; p < probe_times.size(); ++p) {
            const double t = probe_times[p];
            while (next_kick < sequence.kicks.size() &&
                   sequence.kicks[next_kick].time <= t) {
                apply_kick(ens, sequence.kicks[next_kick]);
                ++next_kick;
            }
            acc.eta[p][trial] =
                retrieval_efficiency(ens, t, config.mode).efficiency;
        }
    });
    return acc.reduce(probe_times, "run_sequence");
}

DecayCurve simulate_storage(const StoragePlan& plan,
                            const std::vector<double>& probe_times,
                            const RunConfig& config) {
    check_ascending(probe_times);
    if (config.n_trials == 0) throw DomainError("simulate_storage: need trials >= 1");
    if (plan.freezing) {
        for (double t : probe_times) {
            if (t - plan.unfreeze_lead < plan.freeze_time)
                throw SequenceError(
                    "simulate_storage: probe too early for freeze/unfreeze pair");
        }
    }

    const Vec3 grad_axis = plan.gradient_mhz_per_m > 0.0
                               ? plan.gradient_axis.normalized()
                               : plan.gradient_axis;

    CurveAccumulator acc(probe_times.size(), config.n_trials);
    for_each_trial(config.n_trials, config.threads, [&](std::size_t trial) {
        AtomEnsemble base = sample_ensemble(
            config.n_atoms, config.cloud, config.species,
            derive_seed(config.master_seed, trial), config.mode);
        if (config.gravity) base.acceleration = {0.0, 0.0, -constants::g_earth};

        for (std::size_t p = 0; p < probe_times.size(); ++p) {
            const double t = probe_times[p];
            // Rebuild the event ledger for this storage duration.
            AtomEnsemble ens = base;
            imprint_spinwave(ens, plan.k_s);
            if (plan.freezing) {
                apply_kick(ens, {plan.freeze_time, plan.freeze_kick, "freeze"});
                apply_kick(ens,
                           {t - plan.unfreeze_lead, -plan.freeze_kick, "unfreeze"});
            }

            ExtraPhaseFn magnetic;
            if (plan.gradient_mhz_per_m > 0.0) {
                // Stationary-atom approximation: phase accrues only while a
                // field-sensitive pair holds the coherence.
                double sensitive = t;
                if (plan.freezing && plan.stored_pair_clock)
                    sensitive = plan.freeze_time + plan.unfreeze_lead;
                else if (!plan.freezing && plan.stored_pair_clock)
                    sensitive = 0.0;
                const double rate =
                    2.0 * std::numbers::pi * plan.gradient_mhz_per_m * 1e6 * sensitive;
                magnetic = [&ens, grad_axis, rate](std::size_t j) {
                    return rate * ens.positions0[j].dot(grad_axis);
                };
            }
            acc.eta[p][trial] =
                retrieval_efficiency(ens, t, config.mode, magnetic).efficiency;
        }
    });
    return acc.reduce(probe_times, plan.freezing ? "frozen" : "unfrozen");
}

}  // namespace dlcz
