#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/clifford.h"
#include "arbor/rng.h"

namespace arbor {

enum class QubitRole : std::uint8_t { Root, Leaf, Ancilla, Environment };

/// Mixed stabilizer state rho ~ prod_i (1 + g_i) / 2 with k <= n independent,
/// commuting generators. Rows are bit-packed (x and z parts) with a sign bit.
class StabilizerTableau {
   public:
    /// n qubits, maximally mixed (k = 0).
    explicit StabilizerTableau(std::size_t n = 0);

    /// |0...0>, stabilized by every Z_q.
    static StabilizerTableau zero_state(std::size_t n);

    /// Generators written as strings like "+XZI" or "-ZZ"; the leading sign is
    /// optional. Throws std::invalid_argument if they are not independent and
    /// commuting.
    static StabilizerTableau from_strings(const std::vector<std::string>& generators);

    std::size_t num_qubits() const { return n_; }
    std::size_t num_generators() const { return signs_.size(); }
    std::string generator_string(std::size_t row) const;
    std::vector<std::string> generator_strings() const;

    std::vector<QubitRole>& roles() { return roles_; }
    const std::vector<QubitRole>& roles() const { return roles_; }

    /// Appends a generator; throws if it breaks commutation or independence.
    void add_generator(std::string_view pauli);

    /// Appends a fresh maximally mixed qubit; returns its index.
    std::size_t append_qubit(QubitRole role = QubitRole::Ancilla);

    void apply_clifford(const TwoQubitClifford& g, std::size_t q1, std::size_t q2);
    void apply_h(std::size_t q);
    void apply_s(std::size_t q);
    void apply_cnot(std::size_t control, std::size_t target);
    void apply_cz(std::size_t a, std::size_t b);
    void apply_x(std::size_t q);
    void apply_z(std::size_t q);

    /// Probability (0, 1/2 or 1) of Z_q = outcome, outcome in {+1, -1}.
    double z_probability(std::size_t q, int outcome) const;

    /// Projective Z measurement with a random outcome drawn from `rng`.
    int measure_z(std::size_t q, Rng& rng);

    /// Projects onto Z_q = outcome and returns its probability. Leaves the
    /// state unchanged (and returns 0) when the outcome is impossible.
    double postselect_z(std::size_t q, int outcome);

    /// Partial trace over q; the qubit is removed and later indices shift down.
    void trace_out(std::size_t q);

    /// Partial trace over q followed by a fresh maximally mixed qubit in place.
    void reset_mixed(std::size_t q);

    /// Von Neumann entropy of the subset, in bits.
    int entropy(std::span<const std::size_t> subset) const;

    /// Rank of the generator matrix over GF(2).
    std::size_t rank() const;

    /// Broken structural invariants (independence, commutation); empty if valid.
    std::vector<std::string> invariant_violations() const;

   private:
    std::size_t words() const { return words_; }
    bool xbit(std::size_t row, std::size_t q) const;
    bool zbit(std::size_t row, std::size_t q) const;
    void set_bits(std::size_t row, std::size_t q, bool x, bool z);
    std::uint64_t* xrow(std::size_t row) { return xs_.data() + row * words_; }
    std::uint64_t* zrow(std::size_t row) { return zs_.data() + row * words_; }
    const std::uint64_t* xrow(std::size_t row) const { return xs_.data() + row * words_; }
    const std::uint64_t* zrow(std::size_t row) const { return zs_.data() + row * words_; }

    /// g_target <- g_source * g_target (generators commute, so order is moot).
    void multiply_into(std::size_t target, std::size_t source);
    void remove_row(std::size_t row);
    void check_qubit(std::size_t q) const;

    /// Sign of +Z_q within the group (0 for +, 1 for -), or -1 if Z_q is not
    /// in the group. Requires every generator to commute with Z_q.
    int z_membership(std::size_t q) const;

    /// Measurement core: forced = +-1 postselects, 0 draws from rng (or +1
    /// when rng is null). Returns the probability of the realized outcome.
    double project_z(std::size_t q, int forced, Rng* rng, int& outcome);

    /// Brings every generator but at most two to identity on q and drops those.
    void drop_support(std::size_t q);

    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> xs_;
    std::vector<std::uint64_t> zs_;
    std::vector<std::uint8_t> signs_;
    std::vector<QubitRole> roles_;
};

}  // namespace arbor
