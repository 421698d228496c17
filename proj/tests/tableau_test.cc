#include <array>
#include <stdexcept>
#include <vector>

#include "arbor/dense_oracle.h"
#include "arbor/tableau.h"
#include "doctest.h"

using namespace arbor;

namespace {

int entropy_of(const StabilizerTableau& t, std::vector<std::size_t> subset) {
    return t.entropy(std::span<const std::size_t>(subset));
}

}  // namespace

TEST_SUITE("tableau") {
    TEST_CASE("Bell pair") {
        StabilizerTableau t = StabilizerTableau::zero_state(2);
        t.apply_h(0);
        t.apply_cnot(0, 1);
        CHECK(entropy_of(t, {0}) == 1);
        CHECK(entropy_of(t, {1}) == 1);
        CHECK(entropy_of(t, {0, 1}) == 0);
        CHECK(t.z_probability(0, +1) == 0.5);
        CHECK(t.invariant_violations().empty());

        t.postselect_z(0, -1);
        CHECK(t.z_probability(1, -1) == 1.0);
        CHECK(entropy_of(t, {1}) == 0);
    }

    TEST_CASE("tracing half a Bell pair leaves a maximally mixed qubit") {
        StabilizerTableau t = StabilizerTableau::from_strings({"XX", "ZZ"});
        t.trace_out(0);
        CHECK(t.num_qubits() == 1);
        CHECK(t.num_generators() == 0);
        CHECK(entropy_of(t, {0}) == 1);
    }

    TEST_CASE("GHZ entropies") {
        StabilizerTableau t = StabilizerTableau::zero_state(3);
        t.apply_h(0);
        t.apply_cnot(0, 1);
        t.apply_cnot(1, 2);
        CHECK(entropy_of(t, {0}) == 1);
        CHECK(entropy_of(t, {0, 1}) == 1);
        CHECK(entropy_of(t, {0, 1, 2}) == 0);
        t.trace_out(2);
        CHECK(entropy_of(t, {0, 1}) == 1);
        CHECK(t.z_probability(0, +1) == 0.5);
    }

    TEST_CASE("impossible outcomes are reported, not applied") {
        StabilizerTableau t = StabilizerTableau::zero_state(1);
        CHECK(t.postselect_z(0, -1) == 0.0);
        CHECK(t.z_probability(0, +1) == 1.0);
        t.apply_x(0);
        CHECK(t.z_probability(0, -1) == 1.0);
    }

    TEST_CASE("reset_mixed keeps the qubit count") {
        StabilizerTableau t = StabilizerTableau::from_strings({"XX", "ZZ"});
        t.reset_mixed(1);
        CHECK(t.num_qubits() == 2);
        CHECK(entropy_of(t, {0, 1}) == 2);
    }

    TEST_CASE("bad generators are rejected") {
        CHECK_THROWS_AS(StabilizerTableau::from_strings({"XI", "ZI"}), std::invalid_argument);
        CHECK_THROWS_AS(StabilizerTableau::from_strings({"ZZ", "ZZ"}), std::invalid_argument);
        StabilizerTableau t(2);
        t.add_generator("ZZ");
        CHECK_THROWS_AS(t.add_generator("XI"), std::invalid_argument);
        CHECK(t.rank() == 1);
        CHECK(t.generator_strings() == std::vector<std::string>{"+ZZ"});
    }

    TEST_CASE("random sequences agree with dense density matrices") {
        DenseCheckOptions opts;
        opts.sequences = 200;
        opts.seed = 99;
        const DenseCheckReport rep = check_tableau_against_dense(opts);
        CHECK(rep.sequences == 200);
        CHECK(rep.entropy_checks > 0);
        CHECK(rep.probability_checks > 0);
        for (const auto& f : rep.failures) {
            INFO(f);
        }
        CHECK(rep.ok());
    }

    TEST_CASE("dense reference entropies") {
        DenseState d = DenseState::from_tableau_strings(2, {"XX", "ZZ"});
        CHECK(d.entropy({0}) == doctest::Approx(1.0));
        CHECK(d.entropy({0, 1}) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(d.trace() == doctest::Approx(1.0));
        d.postselect_z(0, +1);
        CHECK(d.z_probability(1, +1) == doctest::Approx(1.0));
    }
}
