#include <random>
#include <stdexcept>

#include "arbor/markov.h"
#include "arbor/oracle.h"
#include "doctest.h"

using namespace arbor;
using enum CState;

namespace {

CState classify_pair(const StabilizerTableau& t, std::size_t root, std::size_t leaf) {
    const std::array<std::size_t, 1> leaves{leaf};
    return classify_cstate(t, root, leaves);
}

}  // namespace

TEST_SUITE("oracle") {
    TEST_CASE("node inputs carry the requested c-states") {
        for (CState a : kAllCStates) {
            for (CState b : kAllCStates) {
                for (SigmaBasis s : {SigmaBasis::X, SigmaBasis::Y, SigmaBasis::Z}) {
                    const StabilizerTableau t = node_input(a, b, s);
                    CHECK(t.num_qubits() == 4);
                    CHECK(classify_pair(t, 0, 2) == a);
                    CHECK(classify_pair(t, 1, 3) == b);
                    CHECK(t.invariant_violations().empty());
                }
            }
        }
    }

    TEST_CASE("exact W of the uniform ensemble matches the closed form") {
        const ExactW ex = compute_w_exact(uniform_ensemble());
        CHECK(ex.alpha == Rational(3, 5));
        CHECK(ex.beta == Rational(1, 3));
        CHECK(ex.gamma == Rational(1, 2));
        CHECK(ex.at(Sigma, Mixed, Sigma) == Rational(2, 5));
        CHECK(ex.at(Two, Two, Two) == Rational(1));
        const TransitionMatrix closed = build_transition_matrix(ex.params());
        for (CState a : kAllCStates) {
            for (CState b : kAllCStates) {
                Rational sum;
                for (CState c : kAllCStates) {
                    CHECK(ex.at(a, b, c) == ex.at(b, a, c));
                    CHECK(ex.at(a, b, c).to_double() == doctest::Approx(closed(a, b, c)).epsilon(1e-15));
                    sum = sum + ex.at(a, b, c);
                }
                CHECK(sum == Rational(1));
            }
        }
        CHECK(ex.matrix().invariant_violations().empty());
    }

    TEST_CASE("the sigma representative does not matter") {
        const GateEnsemble ens = uniform_ensemble();
        const ExactW z = compute_w_exact(ens, SigmaBasis::Z);
        for (SigmaBasis s : {SigmaBasis::X, SigmaBasis::Y}) {
            const ExactW other = compute_w_exact(ens, s);
            for (CState a : kAllCStates) {
                for (CState b : kAllCStates) {
                    for (CState c : kAllCStates) {
                        CHECK(other.at(a, b, c) == z.at(a, b, c));
                    }
                }
            }
        }
    }

    TEST_CASE("deterministic gates realize alpha 0 and 1") {
        CHECK(compute_w_exact({{alpha_zero_gate(), Rational(1)}}).params().alpha == 0.0);
        const ExactW one = compute_w_exact({{alpha_one_gate(), Rational(1)}});
        CHECK(one.alpha == Rational(1));
        CHECK(one.beta == Rational(0));
        CHECK(one.gamma == Rational(0));
    }

    TEST_CASE("mixtures of the deterministic gates fill in the full table") {
        for (const Rational mix : {Rational(3, 10), Rational(1, 2), Rational(7, 8)}) {
            const ExactW ex = compute_w_exact(deterministic_mixture(mix));
            CHECK(ex.alpha == mix);
            const TransitionMatrix closed = build_transition_matrix({mix.to_double(), 0.0, 0.0});
            for (CState a : kAllCStates) {
                for (CState b : kAllCStates) {
                    for (CState c : kAllCStates) {
                        CHECK(ex.at(a, b, c).to_double() == doctest::Approx(closed(a, b, c)).epsilon(1e-15));
                    }
                }
            }
        }
    }

    TEST_CASE("purification equivalence holds gate by gate") {
        const PurificationReport rep = verify_purification_equivalence(uniform_ensemble());
        CHECK(rep.gates_checked == 720);
        CHECK(rep.ok());
    }

    TEST_CASE("Pauli frames do not change node transitions") {
        const auto group = enumerate_symplectic_group();
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
        std::uniform_int_distribution<int> frame(0, 15);
        std::uniform_int_distribution<int> state(0, 3);
        for (int i = 0; i < 10000; ++i) {
            const TwoQubitClifford& g = group[pick(rng)];
            const TwoQubitClifford framed = g.then(TwoQubitClifford::pauli(static_cast<PauliBits>(frame(rng))));
            const CState a = kAllCStates[state(rng)];
            const CState b = kAllCStates[state(rng)];
            CHECK(node_transition(framed, a, b) == node_transition(g, a, b));
        }
    }

    TEST_CASE("node measurement probabilities") {
        const std::array<std::size_t, 2> leaves{2, 3};
        // Both wires Bell-paired: the measured qubit is locally maximally mixed.
        for (const auto& g : {TwoQubitClifford(), TwoQubitClifford::cnot(), alpha_one_gate()}) {
            const NodeOutcome up = node_op(node_input(Two, Two), 0, 1, g, leaves, +1);
            CHECK(up.probability == 0.5);
            CHECK(up.state.num_qubits() == 3);
            CHECK(up.cstate == Two);
        }
        // A Z-basis pure input under the identity gives a certain outcome.
        const NodeOutcome certain = node_op(node_input(Sigma, Two), 0, 1, TwoQubitClifford(), leaves, +1);
        CHECK(certain.probability == 1.0);
        const NodeOutcome impossible = node_op(node_input(Sigma, Two), 0, 1, TwoQubitClifford(), leaves, -1);
        CHECK(impossible.probability == 0.0);
        Rng r(3);
        const NodeOutcome drawn = node_op(node_input(Two, Mixed), 0, 1, TwoQubitClifford::cnot(), leaves, std::nullopt, &r);
        CHECK((drawn.outcome == 1 || drawn.outcome == -1));
        CHECK(drawn.probability == 0.5);
    }
}
