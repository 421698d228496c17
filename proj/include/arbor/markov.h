#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "arbor/cstate.h"

namespace arbor {

/// Inputs per node. Only binary trees have transition tables; the recursion is
/// written against this constant so the data path does not assume it silently.
inline constexpr std::size_t kNodeArity = 2;

/// Gate-ensemble parameters (alpha, beta, gamma). They fully determine W.
struct GateParams {
    double alpha = 0.6;
    double beta = 1.0 / 3.0;
    double gamma = 0.5;

    /// Uniform two-qubit Clifford ensemble: (3/5, 1/3, 1/2).
    static GateParams clifford() { return {0.6, 1.0 / 3.0, 0.5}; }

    void validate() const;
};

/// Per-wire measurement probability p and decoherence probability r.
struct NoiseParams {
    double p = 0.0;
    double r = 0.0;

    void validate() const;
};

/// W((a,b) -> c), symmetric in its inputs.
class TransitionMatrix {
   public:
    /// All-zero matrix; fill with `set`.
    TransitionMatrix() = default;

    double operator()(CState a, CState b, CState c) const {
        return w_[index_of(a)][index_of(b)][index_of(c)];
    }

    /// Sets w(a,b,c) and w(b,a,c).
    void set(CState a, CState b, CState c, double value);

    /// Human-readable list of broken invariants (symmetry, row sums, diagonal,
    /// no-resurrection). Empty when the matrix is well formed.
    std::vector<std::string> invariant_violations(double tol = 1e-15) const;

   private:
    std::array<std::array<std::array<double, kNumCStates>, kNumCStates>, kNumCStates> w_{};
};

/// Closed-form W for an (alpha, beta, gamma) ensemble. Throws std::domain_error
/// if any parameter is outside [0,1].
TransitionMatrix build_transition_matrix(const GateParams& g);

/// Measurement (rate p) followed by decoherence (rate r) on a single wire.
CStateDist apply_noise_channel(const CStateDist& d, const NoiseParams& n);

/// One node layer without the wire channel: P'(c) = sum_ab W(ab->c) P(a) P(b).
CStateDist apply_nodes(const CStateDist& d, const TransitionMatrix& w);

/// Wire channel then node layer.
CStateDist recursion_step(const CStateDist& d, const TransitionMatrix& w, const NoiseParams& n);
CStateDist recursion_step(const CStateDist& d, const GateParams& g, const NoiseParams& n);

/// One depth layer of a protocol.
struct Layer {
    GateParams gate;
    NoiseParams noise;
};

/// Periodic schedule of layers plus the distribution on the leaf wires.
///
/// With `bulk_noise_on_leaves` false, the first layer's wires skip the bulk
/// channel: `initial` already describes the noisy leaf wires (boundary noise).
struct Protocol {
    CStateDist initial;
    std::vector<Layer> schedule;
    bool bulk_noise_on_leaves = true;

    std::size_t period() const { return schedule.size(); }
    void validate() const;

    static Protocol single_step(const GateParams& g, const NoiseParams& n,
                                const CStateDist& initial = CStateDist());

    /// Leaves start as (1 - r_leaves, 0, 0, r_leaves); bulk noise starts at
    /// the first internal wire.
    static Protocol boundary_noise(std::vector<Layer> schedule, double r_leaves);
};

struct FixedPointResult {
    CStateDist dist;
    std::size_t iterations = 0;  // depth layers applied
    bool converged = false;
    double residual = 0.0;  // max-norm change over the last full period
};

inline constexpr double kDefaultFixedPointTol = 1e-13;
inline constexpr std::size_t kDefaultMaxDepth = 10'000'000;

/// Iterates the period-composed map until the change over one period is
/// below `tol` and the geometric tail estimate agrees. Non-convergence within
/// `max_depth` layers is reported through the flag, not thrown.
FixedPointResult iterate(const Protocol& proto, double tol = kDefaultFixedPointTol,
                         std::size_t max_depth = kDefaultMaxDepth);

/// Extrapolated limit of the period-composed iteration: an Aitken estimate
/// x + dx rho / (1 - rho) with one rate rho for all components. At depth
/// checkpoints 64, 128, 256, ... periods the latest estimate is offered to
/// `accept` together with the previous one, provided one period of the map
/// moves it by at most `tol` (so a slow passage is not mistaken for a limit). Near a continuous transition the
/// approach is geometric with a rate 1 - O(distance), so the estimate settles
/// after O(1/distance) layers, while plain convergence needs about
/// log(1/tol) times that.
struct LimitEstimate {
    CStateDist current;
    std::array<double, kNumCStates> limit{};
    std::size_t iterations = 0;
    bool converged = false;  // plain convergence; limit == current
    bool accepted = false;
};

/// (previous checkpoint estimate, latest estimate) -> stop now.
using LimitAcceptor =
    std::function<bool(const std::array<double, kNumCStates>&, const std::array<double, kNumCStates>&)>;

LimitEstimate extrapolate_limit(const Protocol& proto, const LimitAcceptor& accept,
                                double tol = kDefaultFixedPointTol,
                                std::size_t max_depth = kDefaultMaxDepth);

/// P_D for a finite depth D (the root of a depth-D tree, before its own wire).
CStateDist evolve(const Protocol& proto, std::size_t depth);

/// Stable fixed point of the noiseless two-state recursion
/// P' = Q^2 + 2 alpha Q (1 - Q), Q = (1-p) P, clamped to [0,1].
/// alpha == 1/2 is rejected (the map degenerates).
double mipt_fixed_point_closed_form(double p, double alpha);

/// 2 P(2) + P(1), in bits.
double mean_mutual_information(const CStateDist& d);

}  // namespace arbor
