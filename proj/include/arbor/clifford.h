#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace arbor {

/// Hermitian two-qubit Pauli as four bits: x1, z1, x2, z2 (bit 0 to bit 3).
/// Both bits set on a qubit means Y.
using PauliBits = std::uint8_t;

inline constexpr PauliBits kX1 = 0b0001;
inline constexpr PauliBits kZ1 = 0b0010;
inline constexpr PauliBits kX2 = 0b0100;
inline constexpr PauliBits kZ2 = 0b1000;

/// Power of i in H(a) H(b) = i^k H(a ^ b), for single-qubit (x, z) codes.
int pauli_product_phase(PauliBits a, PauliBits b);

/// Symplectic form over GF(2): 1 iff the two Paulis anticommute.
int symplectic_form(PauliBits a, PauliBits b);

/// Two-qubit Clifford, stored as the conjugation images of X1, Z1, X2, Z2.
class TwoQubitClifford {
   public:
    /// Identity.
    TwoQubitClifford();

    /// Throws std::invalid_argument unless the images preserve the
    /// symplectic form. Bit i of `signs` negates image i.
    TwoQubitClifford(std::array<PauliBits, 4> images, std::uint8_t signs = 0);

    static TwoQubitClifford h(int qubit);  // qubit 1 or 2
    static TwoQubitClifford s(int qubit);
    static TwoQubitClifford cnot();  // control 1, target 2
    static TwoQubitClifford cz();
    static TwoQubitClifford pauli(PauliBits p);

    const std::array<PauliBits, 4>& images() const { return images_; }
    std::uint8_t signs() const { return signs_; }

    /// U H(p) U^dagger = (-1)^sign H(image).
    std::pair<PauliBits, bool> conjugate(PauliBits p) const { return lut_[p]; }

    /// Apply this, then `next`.
    TwoQubitClifford then(const TwoQubitClifford& next) const;
    TwoQubitClifford inverse() const;

    /// Sign-free 16-bit key; orders the symplectic group lexicographically.
    std::uint16_t symplectic_key() const;
    bool is_identity_symplectic() const;

    std::string to_string() const;

    friend bool operator==(const TwoQubitClifford& a, const TwoQubitClifford& b) {
        return a.images_ == b.images_ && a.signs_ == b.signs_;
    }

   private:
    void build_lut();

    std::array<PauliBits, 4> images_{kX1, kZ1, kX2, kZ2};
    std::uint8_t signs_ = 0;
    std::array<std::pair<PauliBits, bool>, 16> lut_{};
};

/// Sp(4,2) by breadth-first closure from {H1, S1, H2, S2, CNOT}, sorted by
/// symplectic_key, all signs +. 720 elements.
std::vector<TwoQubitClifford> enumerate_symplectic_group();

/// The 16 sign variants of one symplectic element (multiplication by Paulis).
std::vector<TwoQubitClifford> sign_variants(const TwoQubitClifford& g);

/// Every element of the two-qubit Clifford group mod phase: 11520.
std::vector<TwoQubitClifford> enumerate_clifford_group();

}  // namespace arbor
