#include "arbor/clifford.h"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace arbor {
namespace {

// Phase exponent of a single-qubit product, codes 0=I 1=X 2=Z 3=Y.
int single_phase(int a, int b) {
    // XY = iZ, YZ = iX, ZX = iY, and the reverses pick up -i.
    static constexpr int table[4][4] = {
        {0, 0, 0, 0},
        {0, 0, -1, 1},   // X*X, X*Z = -iY, X*Y = iZ
        {0, 1, 0, -1},   // Z*X = iY, Z*Z, Z*Y = -iX
        {0, -1, 1, 0},   // Y*X = -iZ, Y*Z = iX, Y*Y
    };
    return table[a][b];
}

char pauli_char(PauliBits p, int qubit) {
    static constexpr char names[4] = {'I', 'X', 'Z', 'Y'};
    return names[(p >> (2 * qubit)) & 3];
}

}  // namespace

int pauli_product_phase(PauliBits a, PauliBits b) {
    int k = single_phase(a & 3, b & 3) + single_phase((a >> 2) & 3, (b >> 2) & 3);
    return ((k % 4) + 4) % 4;
}

int symplectic_form(PauliBits a, PauliBits b) {
    const int x_a = (a & 1) | ((a >> 1) & 2);
    const int z_a = ((a >> 1) & 1) | ((a >> 2) & 2);
    const int x_b = (b & 1) | ((b >> 1) & 2);
    const int z_b = ((b >> 1) & 1) | ((b >> 2) & 2);
    return __builtin_popcount((x_a & z_b) ^ (z_a & x_b)) & 1;
}

TwoQubitClifford::TwoQubitClifford() { build_lut(); }

TwoQubitClifford::TwoQubitClifford(std::array<PauliBits, 4> images, std::uint8_t signs)
    : images_(images), signs_(signs & 0xF) {
    static constexpr std::array<PauliBits, 4> basis{kX1, kZ1, kX2, kZ2};
    for (int i = 0; i < 4; ++i) {
        if (images_[i] == 0 || images_[i] > 15) {
            throw std::invalid_argument("Clifford image must be a non-identity two-qubit Pauli");
        }
        for (int j = 0; j < 4; ++j) {
            if (symplectic_form(images_[i], images_[j]) != symplectic_form(basis[i], basis[j])) {
                throw std::invalid_argument("Clifford images do not preserve the symplectic form");
            }
        }
    }
    build_lut();
}

void TwoQubitClifford::build_lut() {
    for (PauliBits p = 0; p < 16; ++p) {
        // H(p) = i^(x1 z1 + x2 z2) X1^x1 Z1^z1 X2^x2 Z2^z2.
        int phase = ((p & 1) && (p & 2)) + ((p & 4) && (p & 8));
        PauliBits acc = 0;
        bool sign = false;
        for (int i = 0; i < 4; ++i) {
            if (p & (1 << i)) {
                phase += pauli_product_phase(acc, images_[i]);
                acc ^= images_[i];
                sign ^= ((signs_ >> i) & 1) != 0;
            }
        }
        phase %= 4;
        if (phase % 2 != 0) {
            throw std::logic_error("Clifford conjugation produced a non-Hermitian Pauli");
        }
        lut_[p] = {acc, sign ^ (phase == 2)};
    }
}

TwoQubitClifford TwoQubitClifford::h(int qubit) {
    if (qubit == 1) {
        return TwoQubitClifford({kZ1, kX1, kX2, kZ2});
    }
    return TwoQubitClifford({kX1, kZ1, kZ2, kX2});
}

TwoQubitClifford TwoQubitClifford::s(int qubit) {
    if (qubit == 1) {
        return TwoQubitClifford({kX1 | kZ1, kZ1, kX2, kZ2});
    }
    return TwoQubitClifford({kX1, kZ1, kX2 | kZ2, kZ2});
}

TwoQubitClifford TwoQubitClifford::cnot() { return TwoQubitClifford({kX1 | kX2, kZ1, kX2, kZ1 | kZ2}); }

TwoQubitClifford TwoQubitClifford::cz() { return TwoQubitClifford({kX1 | kZ2, kZ1, kZ1 | kX2, kZ2}); }

TwoQubitClifford TwoQubitClifford::pauli(PauliBits p) {
    static constexpr std::array<PauliBits, 4> basis{kX1, kZ1, kX2, kZ2};
    std::uint8_t signs = 0;
    for (int i = 0; i < 4; ++i) {
        if (symplectic_form(p, basis[i])) {
            signs |= static_cast<std::uint8_t>(1 << i);
        }
    }
    return TwoQubitClifford(basis, signs);
}

TwoQubitClifford TwoQubitClifford::then(const TwoQubitClifford& next) const {
    std::array<PauliBits, 4> images{};
    std::uint8_t signs = 0;
    for (int i = 0; i < 4; ++i) {
        const auto [img, s] = next.conjugate(images_[i]);
        images[i] = img;
        if (s ^ (((signs_ >> i) & 1) != 0)) {
            signs |= static_cast<std::uint8_t>(1 << i);
        }
    }
    return TwoQubitClifford(images, signs);
}

TwoQubitClifford TwoQubitClifford::inverse() const {
    static constexpr std::array<PauliBits, 4> basis{kX1, kZ1, kX2, kZ2};
    std::array<PauliBits, 4> images{};
    std::uint8_t signs = 0;
    for (int i = 0; i < 4; ++i) {
        for (PauliBits p = 1; p < 16; ++p) {
            if (lut_[p].first == basis[i]) {
                images[i] = p;
                if (lut_[p].second) {
                    signs |= static_cast<std::uint8_t>(1 << i);
                }
                break;
            }
        }
    }
    return TwoQubitClifford(images, signs);
}

std::uint16_t TwoQubitClifford::symplectic_key() const {
    return static_cast<std::uint16_t>(images_[0] << 12 | images_[1] << 8 | images_[2] << 4 | images_[3]);
}

bool TwoQubitClifford::is_identity_symplectic() const {
    return images_ == std::array<PauliBits, 4>{kX1, kZ1, kX2, kZ2};
}

std::string TwoQubitClifford::to_string() const {
    static constexpr const char* names[4] = {"X1", "Z1", "X2", "Z2"};
    std::ostringstream out;
    for (int i = 0; i < 4; ++i) {
        out << (i ? " " : "") << names[i] << "->" << (((signs_ >> i) & 1) ? '-' : '+')
            << pauli_char(images_[i], 0) << pauli_char(images_[i], 1);
    }
    return out.str();
}

std::vector<TwoQubitClifford> enumerate_symplectic_group() {
    const std::vector<TwoQubitClifford> gens{TwoQubitClifford::h(1), TwoQubitClifford::s(1),
                                             TwoQubitClifford::h(2), TwoQubitClifford::s(2),
                                             TwoQubitClifford::cnot()};
    std::vector<TwoQubitClifford> out;
    std::unordered_set<std::uint16_t> seen;
    std::queue<TwoQubitClifford> frontier;
    frontier.push(TwoQubitClifford());
    seen.insert(TwoQubitClifford().symplectic_key());
    while (!frontier.empty()) {
        const TwoQubitClifford g = frontier.front();
        frontier.pop();
        out.push_back(TwoQubitClifford(g.images()));
        for (const TwoQubitClifford& gen : gens) {
            const TwoQubitClifford next = g.then(gen);
            if (seen.insert(next.symplectic_key()).second) {
                frontier.push(next);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const TwoQubitClifford& a, const TwoQubitClifford& b) {
        return a.symplectic_key() < b.symplectic_key();
    });
    return out;
}

std::vector<TwoQubitClifford> sign_variants(const TwoQubitClifford& g) {
    std::vector<TwoQubitClifford> out;
    out.reserve(16);
    for (std::uint8_t s = 0; s < 16; ++s) {
        out.emplace_back(g.images(), s);
    }
    return out;
}

std::vector<TwoQubitClifford> enumerate_clifford_group() {
    std::vector<TwoQubitClifford> out;
    out.reserve(11520);
    for (const TwoQubitClifford& g : enumerate_symplectic_group()) {
        for (const TwoQubitClifford& v : sign_variants(g)) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace arbor
