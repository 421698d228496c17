#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arbor/clifford.h"
#include "arbor/tableau.h"

namespace arbor {

/// Dense density matrix on a few qubits (qubit q is bit q of the basis index).
/// This is a reference implementation for checking the tableau engine and
/// shares no code with it beyond the gate images used for lookup.
class DenseState {
   public:
    static constexpr std::size_t kMaxQubits = 6;

    explicit DenseState(std::size_t n);  // maximally mixed
    static DenseState from_tableau_strings(std::size_t n, const std::vector<std::string>& generators);

    std::size_t num_qubits() const { return n_; }

    void apply_clifford(const TwoQubitClifford& g, std::size_t q1, std::size_t q2);
    void apply_h(std::size_t q);
    void apply_s(std::size_t q);
    void apply_cnot(std::size_t control, std::size_t target);

    double z_probability(std::size_t q, int outcome) const;
    /// Projects and renormalizes; returns the outcome probability.
    double postselect_z(std::size_t q, int outcome);
    void trace_out(std::size_t q);
    void reset_mixed(std::size_t q);

    /// Von Neumann entropy in bits from the eigenvalues of the reduced state.
    double entropy(const std::vector<std::size_t>& subset) const;

    double trace() const;

   private:
    void apply_unitary(const Eigen::MatrixXcd& u);

    std::size_t n_;
    Eigen::MatrixXcd rho_;
};

struct DenseCheckOptions {
    std::size_t sequences = 1000;
    std::size_t max_qubits = 4;
    std::size_t ops_per_sequence = 12;
    std::size_t shots = 200;  // per measurement-statistics check
    std::uint64_t seed = 1;
};

struct DenseCheckReport {
    std::size_t sequences = 0;
    std::size_t entropy_checks = 0;
    std::size_t probability_checks = 0;
    std::size_t frequency_checks = 0;
    double worst_frequency_sigma = 0.0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Random gate / measurement / trace sequences run side by side on a tableau
/// and a dense state. Entropies of every subset must agree exactly, outcome
/// probabilities exactly, and sampled tableau frequencies within 4 sigma.
DenseCheckReport check_tableau_against_dense(const DenseCheckOptions& opts = {});

}  // namespace arbor
