#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "arbor/cstate.h"
#include "arbor/markov.h"
#include "arbor/oracle.h"

namespace arbor {

/// Thrown when a simulation would need more qubits than allowed.
class ResourceLimitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxTreeDepth = 10;
inline constexpr std::size_t kHardQubitCap = 4096;

struct TreeSimConfig {
    std::size_t depth = 4;
    GateEnsemble ensemble;  // empty: the uniform ensemble
    NoiseParams noise;
    CStateDist initial;  // c-state distribution of the leaf wires
    bool bulk_noise_on_leaves = true;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    std::size_t qubit_cap = 0;  // 0: 2 * 2^depth + depth
    unsigned threads = 0;
};

struct TreeSimResult {
    std::array<std::size_t, kNumCStates> counts{};
    std::size_t trials = 0;
    std::size_t qubits = 0;

    double frequency(CState c) const;
    /// Binomial standard error of frequency(c).
    double standard_error(CState c) const;
    /// Standard error at a reference probability p (useful when the
    /// empirical frequency is 0 or 1).
    double standard_error_at(double p) const;
};

/// Monte Carlo over depth-`depth` binary trees with explicit stabilizer
/// states. Each trial draws gates, noise locations and outcomes from its own
/// stream derived from (seed, trial index), so results do not depend on
/// scheduling. The root is classified against all leaf qubits.
TreeSimResult simulate_tree(const TreeSimConfig& config);

}  // namespace arbor
