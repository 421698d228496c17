#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arbor/clifford.h"
#include "arbor/cstate.h"
#include "arbor/markov.h"
#include "arbor/rational.h"
#include "arbor/tableau.h"

namespace arbor {

/// Thrown when a structural property the reduction relies on is violated.
class InvariantViolation : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Mutual information I(root; leaves) = S_R + S_L - S_RL, then the c-state.
CState classify_cstate(const StabilizerTableau& t, std::size_t root,
                       std::span<const std::size_t> leaves);

struct NodeOutcome {
    CState cstate = CState::Mixed;
    StabilizerTableau state;  // after tracing out a; b is renumbered if b > a
    int outcome = 1;
    double probability = 1.0;  // of `outcome`; 0 when a forced outcome is impossible
};

/// Gate on (a, b), Z measurement of a, trace over a. The c-state of b is
/// classified against `leaves` (indices before the trace). With `forced`
/// set the measurement is postselected; otherwise rng must be non-null.
NodeOutcome node_op(const StabilizerTableau& t, std::size_t a, std::size_t b,
                    const TwoQubitClifford& g, std::span<const std::size_t> leaves,
                    std::optional<int> forced, Rng* rng = nullptr);

/// Pure-state basis used for the sigma representative.
enum class SigmaBasis { X, Y, Z };

/// Four-qubit input [a, b, L_a, L_b] with c-state ca on (a, L_a) and cb on
/// (b, L_b): Bell pair for 2, {Z Z_L} for 1, a pure state for sigma, nothing
/// for M.
StabilizerTableau node_input(CState ca, CState cb, SigmaBasis sigma = SigmaBasis::Z);

struct WeightedGate {
    TwoQubitClifford gate;
    Rational weight;
};
using GateEnsemble = std::vector<WeightedGate>;

/// The 720 symplectic classes with equal weight.
GateEnsemble uniform_ensemble();

/// The two deterministic gates with alpha = 0 and alpha = 1 (beta = gamma = 0).
/// gate 1: H_a, CZ, H_a. gate 2: H_b, CZ, H_a. Qubit 1 is a.
TwoQubitClifford alpha_zero_gate();
TwoQubitClifford alpha_one_gate();

/// weight(alpha_one_gate) = alpha_mix.
GateEnsemble deterministic_mixture(const Rational& alpha_mix);

/// Output c-state of one gate on one input pair. Both outcomes are checked
/// and must agree, otherwise InvariantViolation.
CState node_transition(const TwoQubitClifford& g, CState ca, CState cb,
                       SigmaBasis sigma = SigmaBasis::Z);

struct ExactW {
    // w[a][b][c] for a <= b in canonical order, mirrored for a > b.
    std::array<std::array<std::array<Rational, kNumCStates>, kNumCStates>, kNumCStates> w{};
    Rational alpha;
    Rational beta;   // W((2,M)->2) / alpha, 0 when alpha = 0
    Rational gamma;  // W((2,M)->M) / (1 - alpha), 0 when alpha = 1

    Rational at(CState a, CState b, CState c) const { return w[index_of(a)][index_of(b)][index_of(c)]; }
    TransitionMatrix matrix() const;
    GateParams params() const;
};

/// Exact W for a weighted ensemble. Input c-state a sits on the measured qubit
/// for the pair (a, b) with a <= b in canonical order.
ExactW compute_w_exact(const GateEnsemble& ensemble, SigmaBasis sigma = SigmaBasis::Z);

struct PurificationReport {
    std::size_t gates_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Per gate and both orientations: (2, sigma) -> 2 iff (M, sigma) -> M.
PurificationReport verify_purification_equivalence(const GateEnsemble& ensemble);

}  // namespace arbor
