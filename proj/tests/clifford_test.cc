#include <set>
#include <stdexcept>

#include "arbor/clifford.h"
#include "doctest.h"

using namespace arbor;

namespace {

constexpr PauliBits kY1 = kX1 | kZ1;

}  // namespace

TEST_SUITE("clifford") {
    TEST_CASE("single-qubit conjugation rules") {
        const auto h = TwoQubitClifford::h(1);
        CHECK(h.conjugate(kX1) == std::pair<PauliBits, bool>{kZ1, false});
        CHECK(h.conjugate(kZ1) == std::pair<PauliBits, bool>{kX1, false});
        CHECK(h.conjugate(kY1) == std::pair<PauliBits, bool>{kY1, true});
        CHECK(h.conjugate(kX2) == std::pair<PauliBits, bool>{kX2, false});

        const auto s = TwoQubitClifford::s(1);
        CHECK(s.conjugate(kX1) == std::pair<PauliBits, bool>{kY1, false});
        CHECK(s.conjugate(kZ1) == std::pair<PauliBits, bool>{kZ1, false});
        CHECK(s.conjugate(kY1) == std::pair<PauliBits, bool>{kX1, true});
    }

    TEST_CASE("entangling gates") {
        const auto cx = TwoQubitClifford::cnot();
        CHECK(cx.conjugate(kX1).first == (kX1 | kX2));
        CHECK(cx.conjugate(kZ2).first == (kZ1 | kZ2));
        CHECK(cx.conjugate(kZ1).first == kZ1);
        CHECK(cx.conjugate(kX2).first == kX2);
        const auto cz = TwoQubitClifford::cz();
        CHECK(cz.conjugate(kX1).first == (kX1 | kZ2));
        CHECK(cz.conjugate(kX2).first == (kZ1 | kX2));
    }

    TEST_CASE("Pauli frames flip anticommuting signs only") {
        const auto x = TwoQubitClifford::pauli(kX1);
        CHECK(x.conjugate(kX1) == std::pair<PauliBits, bool>{kX1, false});
        CHECK(x.conjugate(kZ1) == std::pair<PauliBits, bool>{kZ1, true});
        CHECK(x.conjugate(kZ2) == std::pair<PauliBits, bool>{kZ2, false});
    }

    TEST_CASE("non-symplectic images are rejected") {
        CHECK_THROWS_AS(TwoQubitClifford({kX1, kX1, kX2, kZ2}), std::invalid_argument);
        CHECK_THROWS_AS(TwoQubitClifford({kX1, kZ2, kX2, kZ1}), std::invalid_argument);
        CHECK_NOTHROW(TwoQubitClifford({kX2, kZ2, kX1, kZ1}));
    }

    TEST_CASE("symplectic group has 720 distinct elements") {
        const auto group = enumerate_symplectic_group();
        CHECK(group.size() == 720);
        std::set<std::uint16_t> keys;
        for (const auto& g : group) {
            keys.insert(g.symplectic_key());
            CHECK(g.signs() == 0);
        }
        CHECK(keys.size() == 720);
        CHECK(group.front().symplectic_key() < group.back().symplectic_key());
    }

    TEST_CASE("full Clifford group has 11520 distinct elements") {
        const auto group = enumerate_clifford_group();
        CHECK(group.size() == 11520);
        std::set<std::pair<std::uint16_t, std::uint8_t>> seen;
        for (const auto& g : group) {
            seen.insert({g.symplectic_key(), g.signs()});
        }
        CHECK(seen.size() == 11520);
        CHECK(sign_variants(TwoQubitClifford()).size() == 16);
    }

    TEST_CASE("closure and inverses") {
        const auto group = enumerate_symplectic_group();
        std::set<std::uint16_t> keys;
        for (const auto& g : group) {
            keys.insert(g.symplectic_key());
        }
        for (std::size_t i = 0; i < group.size(); i += 37) {
            for (std::size_t j = 0; j < group.size(); j += 41) {
                CHECK(keys.count(group[i].then(group[j]).symplectic_key()) == 1);
            }
        }
        for (const auto& g : enumerate_clifford_group()) {
            const auto id = g.then(g.inverse());
            CHECK(id.is_identity_symplectic());
            CHECK(id.signs() == 0);
        }
    }

    TEST_CASE("composition order") {
        // H then S maps X -> Z -> Z, and Z -> X -> Y.
        const auto hs = TwoQubitClifford::h(1).then(TwoQubitClifford::s(1));
        CHECK(hs.conjugate(kX1).first == kZ1);
        CHECK(hs.conjugate(kZ1).first == kY1);
    }

    TEST_CASE("symplectic form and phases") {
        CHECK(symplectic_form(kX1, kZ1) == 1);
        CHECK(symplectic_form(kX1, kZ2) == 0);
        CHECK(symplectic_form(kX1 | kX2, kZ1 | kZ2) == 0);
        // X Z = -i Y
        CHECK(pauli_product_phase(kX1, kZ1) == 3);
        CHECK(pauli_product_phase(kZ1, kX1) == 1);
    }
}
