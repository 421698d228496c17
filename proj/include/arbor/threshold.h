#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arbor/markov.h"
#include "arbor/parallel.h"

namespace arbor {

enum class Phase { Quantum, Classical, Noisy };
std::string_view to_string(Phase phase);

inline constexpr double kDefaultPhaseEps = 1e-9;
inline constexpr double kDefaultJumpEps = 0.01;

/// Phase of a distribution, without any convergence bookkeeping.
Phase classify_dist(const CStateDist& d, double eps = kDefaultPhaseEps);

/// Throws ComputationError if `fp` did not converge.
Phase classify_phase(const FixedPointResult& fp, double eps = kDefaultPhaseEps);

/// Region whose boundary a threshold search locates.
enum class PhaseRegion {
    Quantum,            // P(2) > eps
    ClassicalOrBetter,  // P(2) + P(1) > eps
};
bool in_region(Phase phase, PhaseRegion region);

enum class Axis { P, R, Alpha, RLeaves };
std::string_view to_string(Axis axis);

enum class TransitionOrder { Continuous, FirstOrder, Undetermined };
std::string_view to_string(TransitionOrder order);

/// Maps a scalar control parameter to a protocol.
using ProtocolFamily = std::function<Protocol(double)>;

struct ThresholdOptions {
    double tol = 1e-6;  // bracket width
    double eps = kDefaultPhaseEps;
    double jump_eps = kDefaultJumpEps;
    double fp_tol = kDefaultFixedPointTol;
    // Near a continuous transition convergence is algebraic in the distance
    // to the critical point; bracket probes need far more depth than a sweep.
    std::size_t max_depth = 1'000'000'000;
};

struct ThresholdResult {
    Axis axis = Axis::P;
    double value = 0.0;
    double lo = 0.0;  // final bracket, lo < hi
    double hi = 0.0;
    bool region_below = true;  // the region holds at lo (and not at hi)
    TransitionOrder order = TransitionOrder::Undetermined;
    double jump = 0.0;  // |P(I!=0)(value - delta) - P(I!=0)(value + delta)|
    double delta = 0.0;
    std::size_t probes = 0;
    std::size_t unconverged_probes = 0;
    std::string diagnostics;
};

/// Bisects `axis` between `lo` and `hi`, which must fall on opposite sides of
/// the region boundary (either order). Throws std::invalid_argument otherwise.
ThresholdResult find_threshold(const ProtocolFamily& family, Axis axis, double lo, double hi,
                               PhaseRegion region, const ThresholdOptions& opts = {});

/// `count` evenly spaced values from lo to hi inclusive (count >= 2), or the
/// single value lo when count == 1.
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
    FixedPointResult fp;
    std::optional<Phase> phase;  // empty when fp did not converge
};

struct PhaseDiagram {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<PhasePoint> points;  // row-major: y outer, x inner

    const PhasePoint& at(std::size_t ix, std::size_t iy) const { return points[iy * xs.size() + ix]; }
};

using ProtocolFamily2D = std::function<Protocol(double, double)>;

struct SweepOptions {
    double eps = kDefaultPhaseEps;
    double fp_tol = kDefaultFixedPointTol;
    std::size_t max_depth = kDefaultMaxDepth;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Every point iterates from the protocol's own initial state.
PhaseDiagram sweep_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                        const ProtocolFamily2D& family, const SweepOptions& opts = {});

/// One-parameter sweep, same contract as sweep_grid.
std::vector<PhasePoint> sweep_line(const std::vector<double>& xs, const ProtocolFamily& family,
                                   const SweepOptions& opts = {});

/// The (p, r) plane at fixed gate parameters.
ProtocolFamily2D noise_plane(const GateParams& g);

struct BoundaryRow {
    double r_leaves = 0.0;
    FixedPointResult fp;
    std::optional<Phase> phase;
};

/// Boundary noise enters through the initial distribution only.
std::vector<BoundaryRow> boundary_noise_scan(const std::vector<double>& r_leaves,
                                             const GateParams& g, const NoiseParams& n,
                                             const SweepOptions& opts = {});

/// Two-step protocol: alpha_even acts on the first (depth 0 -> 1) layer.
struct MultistepParams {
    double alpha_even = 0.8;
    double alpha_odd = 0.2;
    double beta = 0.0;
    double gamma = 0.0;
    double p = 0.0;
    double r = 0.0;
    double r_leaves = 0.0;

    std::vector<Layer> schedule() const;
    Protocol protocol() const;

    /// Protocol family along `axis` with the other parameters held fixed.
    ProtocolFamily family(Axis axis) const;
};

std::vector<PhasePoint> multistep_scan(const MultistepParams& params, Axis axis,
                                       const std::vector<double>& values,
                                       const SweepOptions& opts = {});

/// Single-step family along `axis` (P, R, Alpha, or RLeaves) around a base point.
ProtocolFamily single_step_family(const GateParams& g, const NoiseParams& n, Axis axis,
                                  double r_leaves = 0.0);

}  // namespace arbor
