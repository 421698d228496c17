#include "arbor/threshold.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace arbor {

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::Quantum:
            return "Quantum";
        case Phase::Classical:
            return "Classical";
        case Phase::Noisy:
            return "Noisy";
    }
    return "?";
}

std::string_view to_string(Axis axis) {
    switch (axis) {
        case Axis::P:
            return "p";
        case Axis::R:
            return "r";
        case Axis::Alpha:
            return "alpha";
        case Axis::RLeaves:
            return "r_leaves";
    }
    return "?";
}

std::string_view to_string(TransitionOrder order) {
    switch (order) {
        case TransitionOrder::Continuous:
            return "Continuous";
        case TransitionOrder::FirstOrder:
            return "FirstOrder";
        case TransitionOrder::Undetermined:
            return "Undetermined";
    }
    return "?";
}

Phase classify_dist(const CStateDist& d, double eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("phase threshold eps must be positive");
    }
    if (d.p2() > eps) {
        return Phase::Quantum;
    }
    if (d.p1() > eps) {
        return Phase::Classical;
    }
    return Phase::Noisy;
}

Phase classify_phase(const FixedPointResult& fp, double eps) {
    if (!fp.converged) {
        std::ostringstream msg;
        msg << "cannot classify an unconverged fixed point (depth " << fp.iterations
            << ", residual " << fp.residual << ")";
        throw ComputationError(msg.str());
    }
    return classify_dist(fp.dist, eps);
}

bool in_region(Phase phase, PhaseRegion region) {
    switch (region) {
        case PhaseRegion::Quantum:
            return phase == Phase::Quantum;
        case PhaseRegion::ClassicalOrBetter:
            return phase != Phase::Noisy;
    }
    return false;
}

ThresholdResult find_threshold(const ProtocolFamily& family, Axis axis, double lo, double hi,
                               PhaseRegion region, const ThresholdOptions& opts) {
    if (!(opts.tol > 0.0)) {
        throw std::invalid_argument("threshold tolerance must be positive");
    }
    if (lo > hi) {
        std::swap(lo, hi);
    }
    const double lo0 = lo;
    const double hi0 = hi;
    ThresholdResult out;
    out.axis = axis;
    std::ostringstream diag;

    // A probe only needs the side of eps its limit falls on. Two checkpoint
    // estimates must clear eps by a factor of 2 on the same side, and agree to
    // 1% when above it. Below eps agreement is not asked for: on an algebraic
    // approach to a positive limit the estimate at depth n is still about
    // half the current value, so it cannot sit below eps/2 twice.
    auto order_parameter = [region](const std::array<double, kNumCStates>& v) {
        return region == PhaseRegion::Quantum ? v[0] : v[0] + v[1];
    };
    const LimitAcceptor accept = [&](const std::array<double, kNumCStates>& prev,
                                     const std::array<double, kNumCStates>& next) {
        const double a = order_parameter(prev);
        const double b = order_parameter(next);
        if (!std::isfinite(a) || !std::isfinite(b)) {
            return false;
        }
        if (a > 2.0 * opts.eps && b > 2.0 * opts.eps) {
            return std::abs(b - a) <= 0.01 * b;
        }
        return a < 0.5 * opts.eps && b < 0.5 * opts.eps;
    };
    auto probe = [&](double x) {
        const LimitEstimate est = extrapolate_limit(family(x), accept, opts.fp_tol, opts.max_depth);
        ++out.probes;
        if (est.accepted) {
            return order_parameter(est.limit) > opts.eps;
        }
        if (!est.converged) {
            ++out.unconverged_probes;
            diag << "unconverged probe at " << to_string(axis) << "=" << x << "; ";
        }
        return in_region(classify_dist(est.current, opts.eps), region);
    };

    const bool in_lo = probe(lo);
    const bool in_hi = probe(hi);
    if (in_lo == in_hi) {
        std::ostringstream msg;
        msg << "threshold bracket [" << lo << ", " << hi << "] on " << to_string(axis)
            << " does not straddle the region boundary";
        throw std::invalid_argument(msg.str());
    }
    while (hi - lo > opts.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (probe(mid) == in_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.lo = lo;
    out.hi = hi;
    out.region_below = in_lo;
    out.value = 0.5 * (lo + hi);

    // Order: compare P(I != 0) on both sides of the bracket, staying inside
    // the caller's interval (the axis may end there).
    out.delta = 10.0 * opts.tol;
    const FixedPointResult below =
        iterate(family(std::max(lo0, out.value - out.delta)), opts.fp_tol, opts.max_depth);
    const FixedPointResult above =
        iterate(family(std::min(hi0, out.value + out.delta)), opts.fp_tol, opts.max_depth);
    out.jump = std::abs((below.dist.p2() + below.dist.p1()) - (above.dist.p2() + above.dist.p1()));
    if (!below.converged || !above.converged) {
        diag << "order probes unconverged; ";
        out.order = TransitionOrder::Undetermined;
    } else if (out.unconverged_probes > 0) {
        out.order = TransitionOrder::Undetermined;
    } else {
        out.order = out.jump > opts.jump_eps ? TransitionOrder::FirstOrder : TransitionOrder::Continuous;
    }
    out.diagnostics = diag.str();
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) {
        throw std::invalid_argument("linspace needs at least one point");
    }
    if (count == 1) {
        return {lo};
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

namespace {

PhasePoint solve_point(double x, double y, const Protocol& proto, const SweepOptions& opts) {
    PhasePoint pt{x, y, iterate(proto, opts.fp_tol, opts.max_depth), std::nullopt};
    if (pt.fp.converged) {
        pt.phase = classify_dist(pt.fp.dist, opts.eps);
    }
    return pt;
}

}  // namespace

PhaseDiagram sweep_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                        const ProtocolFamily2D& family, const SweepOptions& opts) {
    if (xs.empty() || ys.empty()) {
        throw std::invalid_argument("phase diagram axes must be non-empty");
    }
    PhaseDiagram diagram{xs, ys, std::vector<PhasePoint>(xs.size() * ys.size())};
    parallel_for(diagram.points.size(), opts.threads, [&](std::size_t i) {
        const double x = xs[i % xs.size()];
        const double y = ys[i / xs.size()];
        diagram.points[i] = solve_point(x, y, family(x, y), opts);
    });
    return diagram;
}

std::vector<PhasePoint> sweep_line(const std::vector<double>& xs, const ProtocolFamily& family,
                                   const SweepOptions& opts) {
    std::vector<PhasePoint> out(xs.size());
    parallel_for(xs.size(), opts.threads,
                 [&](std::size_t i) { out[i] = solve_point(xs[i], 0.0, family(xs[i]), opts); });
    return out;
}

ProtocolFamily2D noise_plane(const GateParams& g) {
    return [g](double p, double r) { return Protocol::single_step(g, NoiseParams{p, r}); };
}

std::vector<BoundaryRow> boundary_noise_scan(const std::vector<double>& r_leaves,
                                             const GateParams& g, const NoiseParams& n,
                                             const SweepOptions& opts) {
    const auto line = sweep_line(
        r_leaves, [&](double rl) { return Protocol::boundary_noise({Layer{g, n}}, rl); }, opts);
    std::vector<BoundaryRow> out;
    out.reserve(line.size());
    for (const PhasePoint& pt : line) {
        out.push_back(BoundaryRow{pt.x, pt.fp, pt.phase});
    }
    return out;
}

std::vector<Layer> MultistepParams::schedule() const {
    const NoiseParams n{p, r};
    return {Layer{GateParams{alpha_even, beta, gamma}, n}, Layer{GateParams{alpha_odd, beta, gamma}, n}};
}

Protocol MultistepParams::protocol() const {
    if (r_leaves > 0.0) {
        return Protocol::boundary_noise(schedule(), r_leaves);
    }
    return Protocol{CStateDist(), schedule(), true};
}

ProtocolFamily MultistepParams::family(Axis axis) const {
    const MultistepParams base = *this;
    switch (axis) {
        case Axis::P:
            return [base](double v) { MultistepParams m = base; m.p = v; return m.protocol(); };
        case Axis::R:
            return [base](double v) { MultistepParams m = base; m.r = v; return m.protocol(); };
        case Axis::RLeaves:
            return [base](double v) {
                MultistepParams m = base;
                return Protocol::boundary_noise(m.schedule(), v);
            };
        case Axis::Alpha:
            break;
    }
    throw std::invalid_argument("multistep scans support the p, r and r_leaves axes");
}

std::vector<PhasePoint> multistep_scan(const MultistepParams& params, Axis axis,
                                       const std::vector<double>& values, const SweepOptions& opts) {
    return sweep_line(values, params.family(axis), opts);
}

ProtocolFamily single_step_family(const GateParams& g, const NoiseParams& n, Axis axis, double r_leaves) {
    auto make = [r_leaves](const GateParams& gate, const NoiseParams& noise) {
        if (r_leaves > 0.0) {
            return Protocol::boundary_noise({Layer{gate, noise}}, r_leaves);
        }
        return Protocol::single_step(gate, noise);
    };
    switch (axis) {
        case Axis::P:
            return [g, n, make](double v) { return make(g, NoiseParams{v, n.r}); };
        case Axis::R:
            return [g, n, make](double v) { return make(g, NoiseParams{n.p, v}); };
        case Axis::Alpha:
            return [g, n, make](double v) { return make(GateParams{v, g.beta, g.gamma}, n); };
        case Axis::RLeaves:
            return [g, n](double v) { return Protocol::boundary_noise({Layer{g, n}}, v); };
    }
    throw std::invalid_argument("unknown axis");
}

}  // namespace arbor
