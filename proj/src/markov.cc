#include "arbor/markov.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>

namespace arbor {
namespace {

void require_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream msg;
        msg << name << " = " << v << " is outside [0,1]";
        throw std::domain_error(msg.str());
    }
}

// Unnormalized channel; the four components sum to 1 analytically.
std::array<double, kNumCStates> channel_raw(const std::array<double, kNumCStates>& d, double p,
                                            double r) {
    const double keep = (1.0 - r) * (1.0 - p);
    return {keep * d[0], keep * d[1], (1.0 - r) * (p + (1.0 - p) * d[2]), r + keep * d[3]};
}

std::array<double, kNumCStates> nodes_raw(const std::array<double, kNumCStates>& t,
                                          const TransitionMatrix& w) {
    static_assert(kNodeArity == 2, "only binary transition tables exist");
    std::array<double, kNumCStates> out{};
    for (std::size_t a = 0; a < kNumCStates; ++a) {
        if (t[a] == 0.0) {
            continue;
        }
        for (std::size_t b = a; b < kNumCStates; ++b) {
            if (t[b] == 0.0) {
                continue;
            }
            const double weight = (a == b ? 1.0 : 2.0) * t[a] * t[b];
            for (std::size_t c = 0; c < kNumCStates; ++c) {
                out[c] += weight * w(kAllCStates[a], kAllCStates[b], kAllCStates[c]);
            }
        }
    }
    return out;
}

}  // namespace

void GateParams::validate() const {
    require_probability(alpha, "alpha");
    require_probability(beta, "beta");
    require_probability(gamma, "gamma");
}

void NoiseParams::validate() const {
    require_probability(p, "p");
    require_probability(r, "r");
}

void TransitionMatrix::set(CState a, CState b, CState c, double value) {
    w_[index_of(a)][index_of(b)][index_of(c)] = value;
    w_[index_of(b)][index_of(a)][index_of(c)] = value;
}

std::vector<std::string> TransitionMatrix::invariant_violations(double tol) const {
    std::vector<std::string> out;
    auto name = [](CState a, CState b, CState c) {
        return "W((" + std::string(to_string(a)) + "," + std::string(to_string(b)) + ")->" +
               std::string(to_string(c)) + ")";
    };
    for (CState a : kAllCStates) {
        for (CState b : kAllCStates) {
            double sum = 0.0;
            for (CState c : kAllCStates) {
                const double v = (*this)(a, b, c);
                sum += v;
                if (v != (*this)(b, a, c)) {
                    out.push_back(name(a, b, c) + " is not input-symmetric");
                }
                if (v < 0.0 || v > 1.0) {
                    out.push_back(name(a, b, c) + " is not a probability");
                }
                const bool resurrects_two = c == CState::Two && a != CState::Two && b != CState::Two;
                const bool both_broken = (a == CState::Sigma || a == CState::Mixed) &&
                                         (b == CState::Sigma || b == CState::Mixed);
                const bool resurrects_info = both_broken && (c == CState::Two || c == CState::One);
                if ((resurrects_two || resurrects_info) && v != 0.0) {
                    out.push_back(name(a, b, c) + " resurrects information");
                }
            }
            if (std::abs(sum - 1.0) > tol) {
                out.push_back("row (" + std::string(to_string(a)) + "," +
                              std::string(to_string(b)) + ") sums to " + std::to_string(sum));
            }
        }
        if ((*this)(a, a, a) != 1.0) {
            out.push_back(name(a, a, a) + " != 1");
        }
    }
    return out;
}

TransitionMatrix build_transition_matrix(const GateParams& g) {
    g.validate();
    const double a = g.alpha;
    const double ab = 1.0 - a;
    const double b = g.beta;
    const double bb = 1.0 - b;
    const double c = g.gamma;
    const double cb = 1.0 - c;

    using enum CState;
    TransitionMatrix w;
    w.set(Two, Two, Two, 1.0);
    w.set(Two, One, Two, a);
    w.set(Two, One, One, ab);
    w.set(Two, Sigma, Two, a);
    w.set(Two, Sigma, Sigma, ab);
    w.set(Two, Mixed, Two, a * b);
    w.set(Two, Mixed, One, a * bb + ab * cb);
    w.set(Two, Mixed, Mixed, ab * c);
    w.set(One, One, One, 1.0);
    w.set(One, Sigma, One, a);
    w.set(One, Sigma, Sigma, ab);
    w.set(One, Mixed, One, ab);
    w.set(One, Mixed, Mixed, a);
    w.set(Sigma, Sigma, Sigma, 1.0);
    w.set(Sigma, Mixed, Sigma, ab);
    w.set(Sigma, Mixed, Mixed, a);
    w.set(Mixed, Mixed, Mixed, 1.0);
    return w;
}

CStateDist apply_noise_channel(const CStateDist& d, const NoiseParams& n) {
    n.validate();
    return CStateDist::normalized(channel_raw(d.values(), n.p, n.r));
}

CStateDist apply_nodes(const CStateDist& d, const TransitionMatrix& w) {
    return CStateDist::normalized(nodes_raw(d.values(), w));
}

CStateDist recursion_step(const CStateDist& d, const TransitionMatrix& w, const NoiseParams& n) {
    n.validate();
    return CStateDist::normalized(nodes_raw(channel_raw(d.values(), n.p, n.r), w));
}

CStateDist recursion_step(const CStateDist& d, const GateParams& g, const NoiseParams& n) {
    return recursion_step(d, build_transition_matrix(g), n);
}

void Protocol::validate() const {
    if (schedule.empty()) {
        throw std::invalid_argument("protocol schedule must have period >= 1");
    }
    for (const Layer& layer : schedule) {
        layer.gate.validate();
        layer.noise.validate();
    }
    // Re-run the validating constructor on the stored distribution.
    (void)CStateDist(initial.p2(), initial.p1(), initial.psigma(), initial.pm());
}

Protocol Protocol::single_step(const GateParams& g, const NoiseParams& n, const CStateDist& initial) {
    return Protocol{initial, {Layer{g, n}}, true};
}

Protocol Protocol::boundary_noise(std::vector<Layer> schedule, double r_leaves) {
    require_probability(r_leaves, "r_leaves");
    return Protocol{CStateDist(1.0 - r_leaves, 0.0, 0.0, r_leaves), std::move(schedule), false};
}

namespace {

using Raw = std::array<double, kNumCStates>;

// Compiled protocol: per schedule slot, the channel coefficients and W
// flattened over unordered input pairs. This is the inner loop of every
// fixed-point search, so it stays branch-free and fully unrolled.
struct Stepper {
    static constexpr std::size_t kPairs = kNumCStates * (kNumCStates + 1) / 2;
    struct Slot {
        double keep = 1.0, not_r = 1.0, p = 0.0, r = 0.0;
        double w[kNumCStates][kPairs] = {};  // c, pair (a<=b); doubled for a != b
    };

    const Protocol& proto;
    std::vector<Slot> slots;

    explicit Stepper(const Protocol& pr) : proto(pr) {
        pr.validate();
        for (const Layer& layer : pr.schedule) {
            const TransitionMatrix w = build_transition_matrix(layer.gate);
            Slot s;
            s.p = layer.noise.p;
            s.r = layer.noise.r;
            s.keep = (1.0 - s.r) * (1.0 - s.p);
            s.not_r = 1.0 - s.r;
            std::size_t k = 0;
            for (std::size_t a = 0; a < kNumCStates; ++a) {
                for (std::size_t b = a; b < kNumCStates; ++b, ++k) {
                    for (std::size_t c = 0; c < kNumCStates; ++c) {
                        s.w[c][k] = (a == b ? 1.0 : 2.0) * w(kAllCStates[a], kAllCStates[b], kAllCStates[c]);
                    }
                }
            }
            slots.push_back(s);
        }
    }

    Raw layer(const Raw& x, std::size_t depth) const {
        const Slot& s = slots[slots.size() == 1 ? 0 : depth % slots.size()];
        Raw t;
        if (depth == 0 && !proto.bulk_noise_on_leaves) {
            t = x;
        } else {
            t = {s.keep * x[0], s.keep * x[1], s.not_r * (s.p + (1.0 - s.p) * x[2]), s.r + s.keep * x[3]};
        }
        const double pair[kPairs] = {t[0] * t[0], t[0] * t[1], t[0] * t[2], t[0] * t[3], t[1] * t[1],
                                     t[1] * t[2], t[1] * t[3], t[2] * t[2], t[2] * t[3], t[3] * t[3]};
        Raw out;
        for (std::size_t c = 0; c < kNumCStates; ++c) {
            const double* w = s.w[c];
            const double even = ((w[0] * pair[0] + w[2] * pair[2]) + (w[4] * pair[4] + w[6] * pair[6])) +
                                w[8] * pair[8];
            const double odd = ((w[1] * pair[1] + w[3] * pair[3]) + (w[5] * pair[5] + w[7] * pair[7])) +
                               w[9] * pair[9];
            out[c] = even + odd;
        }
        // Same contract as CStateDist::normalized, which reports failures.
        const double lowest = std::min(std::min(out[0], out[1]), std::min(out[2], out[3]));
        const double sum = (std::max(out[0], 0.0) + std::max(out[1], 0.0)) +
                           (std::max(out[2], 0.0) + std::max(out[3], 0.0));
        if (!(lowest >= CStateDist::kRoundoffFloor) || !(sum > 0.0) || !(sum < 2.0)) {
            return CStateDist::normalized(out).values();
        }
        const double inv = 1.0 / sum;
        return {std::max(out[0], 0.0) * inv, std::max(out[1], 0.0) * inv, std::max(out[2], 0.0) * inv,
                std::max(out[3], 0.0) * inv};
    }

    CStateDist layer(const CStateDist& d, std::size_t depth) const {
        return CStateDist::normalized(layer(d.values(), depth));
    }
};

// A component is settled once its change is at the rounding floor of its value.
bool settled(double delta, double before, double after) {
    constexpr double kUlps = 4.0 * std::numeric_limits<double>::epsilon();
    return delta <= kUlps * std::max(std::abs(before), std::abs(after)) ||
           delta < std::numeric_limits<double>::min();
}

// Periods between convergence tests. Each test looks at two consecutive periods.
constexpr std::size_t kCheckEvery = 8;

// Shared driver. Applies whole periods; on every kCheckEvery-th period it runs
// the convergence test and then `on_check(step, prev_step, current, n)` with
// the signed changes over that period and the one before, where n counts
// periods. `on_check` returns true to stop.
template <class OnCheck>
FixedPointResult run_periods(const Protocol& proto, double tol, std::size_t max_depth, OnCheck on_check) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("fixed-point tolerance must be positive");
    }
    if (max_depth < 1) {
        throw std::invalid_argument("max_depth must be >= 1");
    }
    const Stepper stepper(proto);
    const std::size_t period = proto.period();

    FixedPointResult result{proto.initial, 0, false, std::numeric_limits<double>::infinity()};
    Raw current = proto.initial.values();
    Raw two_back{};
    Raw one_back{};
    std::size_t depth = 0;
    std::size_t n = 0;
    while (depth + period <= max_depth) {
        const std::size_t phase = (n + 1) % kCheckEvery;
        if (phase == kCheckEvery - 1) {
            two_back = current;
        } else if (phase == 0) {
            one_back = current;
        }
        for (std::size_t k = 0; k < period; ++k) {
            current = stepper.layer(current, depth++);
        }
        ++n;
        if (phase != 0 && depth + period <= max_depth) {
            continue;
        }
        result.dist = CStateDist::normalized(current);
        result.iterations = depth;
        if (phase != 0) {
            break;  // out of depth mid-block; keep the last residual
        }
        Raw step{};
        Raw prev_step{};
        double residual = 0.0;
        bool done = true;
        for (std::size_t i = 0; i < kNumCStates; ++i) {
            step[i] = current[i] - one_back[i];
            prev_step[i] = one_back[i] - two_back[i];
            const double delta = std::abs(step[i]);
            const double prev_delta = std::abs(prev_step[i]);
            residual = std::max(residual, delta);
            if (settled(delta, one_back[i], current[i])) {
                continue;
            }
            if (delta > tol || !(prev_delta > 0.0)) {
                done = false;
                continue;
            }
            const double rho = delta / prev_delta;
            if (rho >= 1.0 || delta * rho / (1.0 - rho) > tol) {
                done = false;
            }
        }
        result.residual = residual;
        if (done) {
            result.converged = true;
            return result;
        }
        if (on_check(step, prev_step, one_back, current, n)) {
            return result;
        }
    }
    return result;
}

}  // namespace

FixedPointResult iterate(const Protocol& proto, double tol, std::size_t max_depth) {
    return run_periods(proto, tol, max_depth,
                       [](const Raw&, const Raw&, const Raw&, const Raw&, std::size_t) { return false; });
}

LimitEstimate extrapolate_limit(const Protocol& proto, const LimitAcceptor& accept, double tol,
                                std::size_t max_depth) {
    LimitEstimate out;
    const Stepper stepper(proto);
    const std::size_t period = proto.period();
    // Projects an estimate onto the simplex; empty if it is far outside.
    auto project = [](const Raw& x) -> std::optional<CStateDist> {
        Raw clamped{};
        for (std::size_t i = 0; i < kNumCStates; ++i) {
            if (!std::isfinite(x[i]) || x[i] < -1e-3 || x[i] > 1.0 + 1e-3) {
                return std::nullopt;
            }
            clamped[i] = std::max(x[i], 0.0);
        }
        return CStateDist::normalized(clamped);
    };
    // Max-norm move of one period of the bulk map started at `start`.
    auto fixed_point_residual = [&](const CStateDist& start) {
        CStateDist y = start;
        for (std::size_t k = 0; k < period; ++k) {
            y = stepper.layer(y, period + k);  // skip the special leaf layer
        }
        return y.max_abs_diff(start);
    };
    // Checkpoint N reads the rate from the states at N - 2m, N - m and N with
    // m about N/16 periods. Over a single period the rate can sit within 1e-8
    // of 1 and is lost to rounding; over m periods it stays resolved.
    struct Plan {
        std::size_t first, second, at;
        bool have_first = false, have_second = false;
    };
    auto plan_for = [](std::size_t at) {
        const std::size_t m = std::max(kCheckEvery, (at / 16 + kCheckEvery - 1) / kCheckEvery * kCheckEvery);
        return Plan{at - 2 * m, at - m, at};
    };
    Plan plan = plan_for(64);
    Raw x0{};
    Raw x1{};
    auto capture = [&](const Raw& now, std::size_t n) {
        if (n == plan.first) {
            x0 = now;
            plan.have_first = true;
        }
        if (n == plan.second) {
            x1 = now;
            plan.have_second = true;
        }
    };
    std::optional<Raw> checkpoint;
    auto estimate = [&](const Raw& now) -> std::optional<CStateDist> {
        // One slow mode drives every component, so the rate is read off the
        // component whose change is best resolved relative to its value.
        std::optional<std::size_t> best;
        double resolution = 0.0;
        for (std::size_t i = 0; i < kNumCStates; ++i) {
            const double d1 = x1[i] - x0[i];
            const double d2 = now[i] - x1[i];
            if (d1 == 0.0 || settled(std::abs(d2), x1[i], now[i])) {
                continue;
            }
            const double res = std::abs(d2) / std::max(std::abs(now[i]), std::numeric_limits<double>::min());
            if (res > resolution) {
                resolution = res;
                best = i;
            }
        }
        const double rho = best ? (now[*best] - x1[*best]) / (x1[*best] - x0[*best]) : 0.0;
        if (!(std::abs(rho) < 1.0)) {
            return std::nullopt;
        }
        Raw raw{};
        for (std::size_t i = 0; i < kNumCStates; ++i) {
            raw[i] = now[i] + (now[i] - x1[i]) * rho / (1.0 - rho);
        }
        return project(raw);
    };
    const FixedPointResult fp = run_periods(
        proto, tol, max_depth, [&](const Raw&, const Raw&, const Raw&, const Raw& now, std::size_t n) {
            capture(now, n);
            if (n != plan.at) {
                return false;
            }
            const bool ready = plan.have_first && plan.have_second;
            plan = plan_for(n + std::max(kCheckEvery, n / 4 / kCheckEvery * kCheckEvery));
            capture(now, n);
            const std::optional<CStateDist> limit = ready ? estimate(now) : std::nullopt;
            if (!limit) {
                checkpoint.reset();
                return false;
            }
            // A slow passage near a saddle-node ghost also yields steady
            // estimates; only a genuine fixed point is offered.
            if (checkpoint && fixed_point_residual(*limit) <= tol && accept(*checkpoint, limit->values())) {
                out.limit = limit->values();
                out.accepted = true;
                return true;
            }
            checkpoint = limit->values();
            return false;
        });
    out.current = fp.dist;
    out.iterations = fp.iterations;
    out.converged = fp.converged;
    if (fp.converged) {
        out.limit = fp.dist.values();
    }
    return out;
}

CStateDist evolve(const Protocol& proto, std::size_t depth) {
    const Stepper stepper(proto);
    Raw current = proto.initial.values();
    for (std::size_t d = 0; d < depth; ++d) {
        current = stepper.layer(current, d);
    }
    return CStateDist::normalized(current);
}

double mipt_fixed_point_closed_form(double p, double alpha) {
    require_probability(p, "p");
    require_probability(alpha, "alpha");
    if (alpha == 0.5) {
        throw std::domain_error("closed form is degenerate at alpha = 1/2");
    }
    if (p == 1.0) {
        return 0.0;
    }
    if (alpha < 0.5) {
        // The interior root lies above 1 and is repelling; from the Bell
        // boundary condition only p = 0 keeps P(2) = 1.
        return p == 0.0 ? 1.0 : 0.0;
    }
    const double q = 1.0 - p;
    const double value = (1.0 - 2.0 * alpha * q) / (q * q * (1.0 - 2.0 * alpha));
    return std::clamp(value, 0.0, 1.0);
}

double mean_mutual_information(const CStateDist& d) { return 2.0 * d.p2() + d.p1(); }

}  // namespace arbor
