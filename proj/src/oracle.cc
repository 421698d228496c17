#include "arbor/oracle.h"

#include <algorithm>
#include <sstream>

namespace arbor {

CState classify_cstate(const StabilizerTableau& t, std::size_t root,
                       std::span<const std::size_t> leaves) {
    if (std::find(leaves.begin(), leaves.end(), root) != leaves.end()) {
        throw std::invalid_argument("root qubit is also listed as a leaf");
    }
    const std::size_t r[1] = {root};
    std::vector<std::size_t> both(leaves.begin(), leaves.end());
    both.push_back(root);
    const int s_root = t.entropy(r);
    const int info = s_root + t.entropy(leaves) - t.entropy(both);
    switch (info) {
        case 2:
            return CState::Two;
        case 1:
            return CState::One;
        case 0:
            return s_root == 0 ? CState::Sigma : CState::Mixed;
        default:
            throw InvariantViolation("mutual information " + std::to_string(info) +
                                     " is impossible for a single root qubit");
    }
}

NodeOutcome node_op(const StabilizerTableau& t, std::size_t a, std::size_t b,
                    const TwoQubitClifford& g, std::span<const std::size_t> leaves,
                    std::optional<int> forced, Rng* rng) {
    if (a == b) {
        throw std::invalid_argument("node_op needs two distinct qubits");
    }
    if (!forced && rng == nullptr) {
        throw std::invalid_argument("node_op needs an rng or a forced outcome");
    }
    for (std::size_t q : leaves) {
        if (q == a || q == b) {
            throw std::invalid_argument("node qubits cannot be leaves");
        }
    }
    NodeOutcome out{CState::Mixed, t, 1, 1.0};
    out.state.apply_clifford(g, a, b);
    if (forced) {
        out.outcome = *forced;
        out.probability = out.state.postselect_z(a, *forced);
        if (out.probability == 0.0) {
            return out;
        }
    } else {
        const double p_plus = out.state.z_probability(a, 1);
        out.outcome = out.state.measure_z(a, *rng);
        out.probability = out.outcome == 1 ? p_plus : 1.0 - p_plus;
    }
    out.state.trace_out(a);
    auto shift = [a](std::size_t q) { return q > a ? q - 1 : q; };
    std::vector<std::size_t> kept;
    kept.reserve(leaves.size());
    for (std::size_t q : leaves) {
        kept.push_back(shift(q));
    }
    out.cstate = classify_cstate(out.state, shift(b), kept);
    return out;
}

StabilizerTableau node_input(CState ca, CState cb, SigmaBasis sigma) {
    StabilizerTableau t(4);
    t.roles() = {QubitRole::Root, QubitRole::Root, QubitRole::Leaf, QubitRole::Leaf};
    auto add = [&](CState c, std::size_t q, std::size_t leaf) {
        auto pauli = [](std::size_t q1, char p1, std::size_t q2 = 9, char p2 = 'I') {
            std::string s(4, 'I');
            s[q1] = p1;
            if (q2 < 4) {
                s[q2] = p2;
            }
            return s;
        };
        switch (c) {
            case CState::Two:
                t.add_generator(pauli(q, 'X', leaf, 'X'));
                t.add_generator(pauli(q, 'Z', leaf, 'Z'));
                break;
            case CState::One:
                t.add_generator(pauli(q, 'Z', leaf, 'Z'));
                break;
            case CState::Sigma: {
                const char p = sigma == SigmaBasis::X ? 'X' : sigma == SigmaBasis::Y ? 'Y' : 'Z';
                t.add_generator(pauli(q, p));
                break;
            }
            case CState::Mixed:
                break;
        }
    };
    add(ca, 0, 2);
    add(cb, 1, 3);
    return t;
}

GateEnsemble uniform_ensemble() {
    const std::vector<TwoQubitClifford> group = enumerate_symplectic_group();
    GateEnsemble out;
    out.reserve(group.size());
    const Rational w(1, static_cast<std::int64_t>(group.size()));
    for (const TwoQubitClifford& g : group) {
        out.push_back(WeightedGate{g, w});
    }
    return out;
}

TwoQubitClifford alpha_zero_gate() {
    return TwoQubitClifford::h(1).then(TwoQubitClifford::cz()).then(TwoQubitClifford::h(1));
}

TwoQubitClifford alpha_one_gate() {
    return TwoQubitClifford::h(2).then(TwoQubitClifford::cz()).then(TwoQubitClifford::h(1));
}

GateEnsemble deterministic_mixture(const Rational& alpha_mix) {
    if (alpha_mix < Rational(0) || Rational(1) < alpha_mix) {
        throw std::domain_error("mixture weight must lie in [0,1]");
    }
    GateEnsemble out;
    if (alpha_mix != Rational(1)) {
        out.push_back(WeightedGate{alpha_zero_gate(), Rational(1) - alpha_mix});
    }
    if (alpha_mix != Rational(0)) {
        out.push_back(WeightedGate{alpha_one_gate(), alpha_mix});
    }
    return out;
}

CState node_transition(const TwoQubitClifford& g, CState ca, CState cb, SigmaBasis sigma) {
    const StabilizerTableau input = node_input(ca, cb, sigma);
    static constexpr std::size_t leaves[2] = {2, 3};
    std::optional<CState> seen;
    for (int outcome : {1, -1}) {
        const NodeOutcome r = node_op(input, 0, 1, g, leaves, outcome);
        if (r.probability == 0.0) {
            continue;
        }
        if (seen && *seen != r.cstate) {
            std::ostringstream msg;
            msg << "c-state depends on the measurement outcome for gate " << g.to_string()
                << " on (" << to_string(ca) << "," << to_string(cb) << ")";
            throw InvariantViolation(msg.str());
        }
        seen = r.cstate;
    }
    if (!seen) {
        throw InvariantViolation("no measurement outcome has nonzero probability");
    }
    return *seen;
}

TransitionMatrix ExactW::matrix() const {
    TransitionMatrix m;
    for (CState a : kAllCStates) {
        for (CState b : kAllCStates) {
            for (CState c : kAllCStates) {
                m.set(a, b, c, at(a, b, c).to_double());
            }
        }
    }
    return m;
}

GateParams ExactW::params() const {
    return GateParams{alpha.to_double(), beta.to_double(), gamma.to_double()};
}

ExactW compute_w_exact(const GateEnsemble& ensemble, SigmaBasis sigma) {
    if (ensemble.empty()) {
        throw std::invalid_argument("gate ensemble is empty");
    }
    Rational total;
    for (const WeightedGate& wg : ensemble) {
        if (wg.weight < Rational(0)) {
            throw std::invalid_argument("negative ensemble weight");
        }
        total += wg.weight;
    }
    if (total != Rational(1)) {
        throw std::invalid_argument("ensemble weights sum to " + total.to_string() + ", not 1");
    }
    ExactW out;
    for (std::size_t ia = 0; ia < kNumCStates; ++ia) {
        for (std::size_t ib = ia; ib < kNumCStates; ++ib) {
            for (const WeightedGate& wg : ensemble) {
                const CState c = node_transition(wg.gate, kAllCStates[ia], kAllCStates[ib], sigma);
                out.w[ia][ib][index_of(c)] += wg.weight;
            }
            out.w[ib][ia] = out.w[ia][ib];
        }
    }
    using enum CState;
    out.alpha = out.at(Two, One, Two);
    out.beta = out.alpha == Rational(0) ? Rational(0) : out.at(Two, Mixed, Two) / out.alpha;
    const Rational not_alpha = Rational(1) - out.alpha;
    out.gamma = not_alpha == Rational(0) ? Rational(0) : out.at(Two, Mixed, Mixed) / not_alpha;
    return out;
}

PurificationReport verify_purification_equivalence(const GateEnsemble& ensemble) {
    PurificationReport report;
    using enum CState;
    for (const WeightedGate& wg : ensemble) {
        ++report.gates_checked;
        const bool keeps_two = node_transition(wg.gate, Two, Sigma) == Two;
        const bool keeps_mixed = node_transition(wg.gate, Mixed, Sigma) == Mixed;
        const bool keeps_two_swapped = node_transition(wg.gate, Sigma, Two) == Two;
        const bool keeps_mixed_swapped = node_transition(wg.gate, Sigma, Mixed) == Mixed;
        if (keeps_two != keeps_mixed || keeps_two_swapped != keeps_mixed_swapped) {
            report.violations.push_back(wg.gate.to_string());
        }
    }
    return report;
}

}  // namespace arbor
