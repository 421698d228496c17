#include "arbor/tree_sim.h"

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "arbor/parallel.h"

namespace arbor {
namespace {

// Draws ensemble members by weight.
class GateSampler {
   public:
    explicit GateSampler(const GateEnsemble& ensemble) : ensemble_(ensemble) {
        double acc = 0.0;
        for (const WeightedGate& wg : ensemble_) {
            acc += wg.weight.to_double();
            cumulative_.push_back(acc);
        }
    }

    const TwoQubitClifford& draw(Rng& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, cumulative_.back())(rng);
        for (std::size_t i = 0; i < cumulative_.size(); ++i) {
            if (u < cumulative_[i]) {
                return ensemble_[i].gate;
            }
        }
        return ensemble_.back().gate;
    }

   private:
    const GateEnsemble& ensemble_;
    std::vector<double> cumulative_;
};

CState draw_cstate(const CStateDist& d, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (CState c : kAllCStates) {
        acc += d[c];
        if (u < acc) {
            return c;
        }
    }
    return CState::Mixed;
}

// Leaf wire w (qubit w) with its reference leaf (qubit leaf), from |00>.
void prepare_wire(StabilizerTableau& t, std::size_t w, std::size_t leaf, CState c) {
    switch (c) {
        case CState::Two:
            t.apply_h(w);
            t.apply_cnot(w, leaf);
            break;
        case CState::One:
            t.reset_mixed(w);
            t.apply_cnot(w, leaf);
            break;
        case CState::Sigma:
            t.reset_mixed(leaf);
            break;
        case CState::Mixed:
            t.reset_mixed(w);
            t.reset_mixed(leaf);
            break;
    }
}

}  // namespace

double TreeSimResult::frequency(CState c) const {
    return trials == 0 ? 0.0 : static_cast<double>(counts[index_of(c)]) / static_cast<double>(trials);
}

double TreeSimResult::standard_error(CState c) const { return standard_error_at(frequency(c)); }

double TreeSimResult::standard_error_at(double p) const {
    return trials == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

TreeSimResult simulate_tree(const TreeSimConfig& config) {
    if (config.depth < 1 || config.depth > kMaxTreeDepth) {
        throw std::domain_error("tree depth must be between 1 and " + std::to_string(kMaxTreeDepth));
    }
    if (config.trials < 1) {
        throw std::domain_error("need at least one trial");
    }
    config.noise.validate();
    const std::size_t wires = std::size_t{1} << config.depth;
    const std::size_t qubits = 2 * wires;
    const std::size_t cap = config.qubit_cap == 0 ? 2 * wires + config.depth : config.qubit_cap;
    if (cap > kHardQubitCap || qubits > cap) {
        std::ostringstream msg;
        msg << "tree of depth " << config.depth << " needs " << qubits << " qubits; cap is "
            << std::min(cap, kHardQubitCap);
        throw ResourceLimitError(msg.str());
    }

    const GateEnsemble ensemble = config.ensemble.empty() ? uniform_ensemble() : config.ensemble;
    const GateSampler sampler(ensemble);
    std::vector<std::size_t> leaves(wires);
    std::iota(leaves.begin(), leaves.end(), wires);

    std::vector<std::uint8_t> outcome(config.trials);
    parallel_for(config.trials, config.threads, [&](std::size_t trial) {
        Rng rng = trial_stream(config.seed, trial);
        std::bernoulli_distribution measured(config.noise.p);
        std::bernoulli_distribution decohered(config.noise.r);

        StabilizerTableau t = StabilizerTableau::zero_state(qubits);
        for (std::size_t w = 0; w < wires; ++w) {
            t.roles()[w] = QubitRole::Root;
            t.roles()[wires + w] = QubitRole::Leaf;
            prepare_wire(t, w, wires + w, draw_cstate(config.initial, rng));
        }
        std::vector<std::size_t> active(wires);
        std::iota(active.begin(), active.end(), 0);
        for (std::size_t layer = 0; layer < config.depth; ++layer) {
            if (layer > 0 || config.bulk_noise_on_leaves) {
                for (std::size_t q : active) {
                    if (measured(rng)) {
                        t.measure_z(q, rng);
                    }
                    if (decohered(rng)) {
                        t.reset_mixed(q);
                    }
                }
            }
            std::vector<std::size_t> next;
            next.reserve(active.size() / 2);
            for (std::size_t j = 0; j + 1 < active.size(); j += 2) {
                const std::size_t a = active[j];
                const std::size_t b = active[j + 1];
                t.apply_clifford(sampler.draw(rng), a, b);
                t.measure_z(a, rng);
                // Tracing a out leaves it as an uncorrelated mixed qubit.
                t.reset_mixed(a);
                t.roles()[a] = QubitRole::Environment;
                next.push_back(b);
            }
            active = std::move(next);
        }
        outcome[trial] = static_cast<std::uint8_t>(index_of(classify_cstate(t, active.front(), leaves)));
    });

    TreeSimResult result;
    result.trials = config.trials;
    result.qubits = qubits;
    for (std::uint8_t c : outcome) {
        ++result.counts[c];
    }
    return result;
}

}  // namespace arbor
