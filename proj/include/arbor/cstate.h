#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arbor {

/// Raised when a numerical routine cannot produce a trustworthy answer
/// (negative probabilities beyond round-off, non-convergence where fatal).
struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Classical label of a root qubit relative to its leaves.
///
/// Two:   Bell pair with the leaves, I(R;L) = 2.
/// One:   classically correlated, I(R;L) = 1.
/// Sigma: pure product state, I = 0.
/// Mixed: maximally mixed and uncorrelated, I = 0.
///
/// The enumerator order is the canonical order used for pair indexing.
enum class CState : std::uint8_t { Two = 0, One = 1, Sigma = 2, Mixed = 3 };

inline constexpr std::size_t kNumCStates = 4;
inline constexpr std::array<CState, kNumCStates> kAllCStates = {
    CState::Two, CState::One, CState::Sigma, CState::Mixed};

constexpr std::size_t index_of(CState c) { return static_cast<std::size_t>(c); }

std::string_view to_string(CState c);
CState cstate_from_string(std::string_view s);

/// Probability vector over the four c-states, ordered (2, 1, sigma, M).
class CStateDist {
   public:
    /// Tolerance on |sum - 1| accepted by the validating constructors.
    static constexpr double kSumTolerance = 1e-12;
    /// Largest negative excursion treated as round-off by `normalized`.
    static constexpr double kRoundoffFloor = -1e-15;

    /// The noiseless boundary condition: every root starts Bell-paired.
    CStateDist() : p_{1.0, 0.0, 0.0, 0.0} {}

    /// Validating constructor; throws std::domain_error on bad input.
    CStateDist(double p2, double p1, double psigma, double pm);

    static CStateDist point(CState c);

    /// Clamps round-off negatives to zero and rescales to unit sum. Anything
    /// below kRoundoffFloor (or a zero/non-finite total) is a ComputationError.
    static CStateDist normalized(const std::array<double, kNumCStates>& raw);

    double operator[](CState c) const { return p_[index_of(c)]; }
    double p2() const { return p_[0]; }
    double p1() const { return p_[1]; }
    double psigma() const { return p_[2]; }
    double pm() const { return p_[3]; }
    const std::array<double, kNumCStates>& values() const { return p_; }

    double max_abs_diff(const CStateDist& other) const;
    std::string to_string() const;

    bool operator==(const CStateDist&) const = default;

   private:
    struct Unchecked {};
    CStateDist(Unchecked, const std::array<double, kNumCStates>& p) : p_(p) {}

    std::array<double, kNumCStates> p_;
};

}  // namespace arbor
