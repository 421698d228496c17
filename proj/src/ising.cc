#include "arbor/ising.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace arbor {
namespace {

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// artanh(tanh(a) tanh(b)) without forming an argument that rounds to +-1.
double artanh_of_product(double a, double b) {
    const double prod = std::tanh(a) * std::tanh(b);
    if (std::abs(prod) < 0.5) {
        return std::atanh(prod);
    }
    return 0.5 * (log_cosh(a + b) - log_cosh(a - b));
}

// Linear-convergence test shared by the scalar iterations: a step is final
// when it sits at the rounding floor, or when both the step and the
// geometric tail estimate are below tol.
class ScalarConvergence {
   public:
    explicit ScalarConvergence(double tol) : tol_(tol) {}

    bool done(double before, double after) {
        const double delta = std::abs(after - before);
        residual_ = delta;
        const bool floor = delta <= 4.0 * std::numeric_limits<double>::epsilon() *
                                        std::max(std::abs(before), std::abs(after)) ||
                           delta < std::numeric_limits<double>::min();
        bool ok = floor;
        if (!ok && delta <= tol_ && prev_ > 0.0) {
            const double rho = delta / prev_;
            ok = rho < 1.0 && delta * rho / (1.0 - rho) <= tol_;
        }
        prev_ = delta;
        return ok;
    }

    double residual() const { return residual_; }

   private:
    double tol_;
    double prev_ = 0.0;
    double residual_ = 0.0;
};

}  // namespace

void IsingParams::validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw std::domain_error("beta must be finite and >= 0");
    }
    if (n_br < 2) {
        throw std::domain_error("n_br must be >= 2");
    }
    if (!std::isfinite(h_bulk)) {
        throw std::domain_error("h_bulk must be finite");
    }
    if (std::isnan(h_boundary)) {
        throw std::domain_error("h_boundary is NaN");
    }
}

double ising_step(double h_r, const IsingParams& params) {
    if (std::isnan(h_r)) {
        throw std::domain_error("ising_step: field is NaN");
    }
    if (params.beta == 0.0) {
        return params.h_bulk;
    }
    const double n = params.n_br;
    if (std::isinf(h_r)) {
        // artanh(tanh(beta)) = beta exactly.
        return params.h_bulk + std::copysign(n, h_r);
    }
    return params.h_bulk + (n / params.beta) * artanh_of_product(params.beta * h_r, params.beta);
}

RootField root_field(const IsingParams& params, std::optional<std::size_t> depth,
                     const RootFieldOptions& opts) {
    params.validate();
    if (!(opts.tol > 0.0)) {
        throw std::invalid_argument("root field tolerance must be positive");
    }
    RootField out{params.h_boundary, 0, true, 0.0};
    if (depth) {
        for (std::size_t d = 0; d < *depth; ++d) {
            const double next = ising_step(out.h_r, params);
            out.residual = std::abs(next - out.h_r);
            out.h_r = next;
        }
        out.depth = *depth;
        return out;
    }
    ScalarConvergence conv(opts.tol);
    out.converged = false;
    for (std::size_t d = 0; d < opts.max_steps; ++d) {
        const double next = ising_step(out.h_r, params);
        const bool finished = std::isfinite(out.h_r) && conv.done(out.h_r, next);
        out.h_r = next;
        out.depth = d + 1;
        out.residual = conv.residual();
        if (finished) {
            out.converged = true;
            break;
        }
    }
    return out;
}

DeltaH delta_h_root(const IsingParams& params, std::optional<std::size_t> depth,
                    const RootFieldOptions& opts) {
    IsingParams up = params;
    up.h_boundary = kInfiniteField;
    IsingParams down = params;
    down.h_boundary = -kInfiniteField;
    const RootField ru = root_field(up, depth, opts);
    const RootField rd = root_field(down, depth, opts);
    return DeltaH{ru.h_r - rd.h_r, ru.h_r, rd.h_r, ru.converged && rd.converged};
}

std::vector<BoundaryFieldRow> boundary_field_scan(double beta, double h_bulk,
                                                  const std::vector<double>& h_leaf, int n_br,
                                                  const RootFieldOptions& opts) {
    IsingParams base{beta, h_bulk, n_br, kInfiniteField};
    const RootField pinned = root_field(base, std::nullopt, opts);
    std::vector<BoundaryFieldRow> out;
    out.reserve(h_leaf.size());
    for (double h : h_leaf) {
        IsingParams p = base;
        p.h_boundary = h;
        const RootField r = root_field(p, std::nullopt, opts);
        out.push_back(BoundaryFieldRow{h, r.h_r, pinned.h_r - r.h_r, r.converged && pinned.converged});
    }
    return out;
}

namespace {

// Generic bisection on an "ordered" predicate that holds at lo and fails at hi.
template <typename Probe>
IsingThreshold bisect(double lo, double hi, double tol, Probe probe, const char* what) {
    if (!(tol > 0.0) || !(lo < hi)) {
        throw std::invalid_argument(std::string(what) + ": need lo < hi and tol > 0");
    }
    IsingThreshold out;
    auto eval = [&](double x) {
        const auto [value, converged] = probe(x);
        ++out.probes;
        if (!converged) {
            ++out.unconverged_probes;
        }
        return value;
    };
    const double v_lo = eval(lo);
    const double v_hi = eval(hi);
    const bool lo_side = v_lo > 0.0;
    if (lo_side == (v_hi > 0.0)) {
        std::ostringstream msg;
        msg << what << ": bracket [" << lo << ", " << hi << "] does not straddle the transition";
        throw std::invalid_argument(msg.str());
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if ((eval(mid) > 0.0) == lo_side) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.lo = lo;
    out.hi = hi;
    out.value = 0.5 * (lo + hi);
    return out;
}

}  // namespace

IsingThreshold find_critical_tanh_beta(int n_br, double lo, double hi, double tol, double eps) {
    if (n_br < 2) {
        throw std::domain_error("n_br must be >= 2");
    }
    if (!(lo > 0.0 && hi < 1.0)) {
        throw std::domain_error("tanh(beta) bracket must lie inside (0, 1)");
    }
    // Iterates t = tanh(beta h) from the all-up boundary. The sequence is
    // decreasing and f is increasing, so it can stop on a certificate:
    // Delta h_R <= eps once the iterate is there, or Delta h_R >= the value at
    // t/2 once f(t/2) >= t/2 (the limit can never pass below t/2).
    auto solve = [n_br, eps](double tb, bool certify) {
        const double beta = std::atanh(tb);
        auto step = [&](double t) {
            const double x = tb * t;
            return n_br == 2 ? 2.0 * x / (1.0 + x * x) : std::tanh(n_br * std::atanh(x));
        };
        // h_R(up) = -h_R(down) at zero bulk field.
        auto delta_h = [beta](double t) { return 2.0 * std::atanh(t) / beta; };
        ScalarConvergence conv(1e-13);
        double t = 1.0;
        for (std::size_t d = 0; d < 2'000'000'000; ++d) {
            const double next = step(t);
            const bool finished = d > 0 && conv.done(t, next);
            t = next;
            if (finished) {
                return std::pair{delta_h(t), true};
            }
            if (certify && delta_h(t) <= eps) {
                return std::pair{delta_h(t), true};
            }
            if (certify && (d & 1023) == 0 && step(0.5 * t) >= 0.5 * t && delta_h(0.5 * t) > eps) {
                return std::pair{delta_h(0.5 * t), true};
            }
        }
        return std::pair{delta_h(t), false};
    };
    auto probe = [&](double tb) {
        const auto [dh, ok] = solve(tb, true);
        return std::pair{dh > eps ? 1.0 : 0.0, ok};
    };
    IsingThreshold out = bisect(lo, hi, tol, probe, "critical tanh(beta)");
    out.below = solve(std::max(lo, out.lo - 100.0 * tol), false).first;
    out.above = solve(std::min(hi, out.hi + 100.0 * tol), false).first;
    return out;
}

IsingThreshold find_critical_field(double beta, int n_br, double lo, double hi, double tol,
                                   double eps) {
    auto dh = [&](double h) { return delta_h_root(IsingParams{beta, h, n_br, kInfiniteField}); };
    auto probe = [&](double h) {
        const DeltaH d = dh(h);
        return std::pair{d.value > eps ? 1.0 : 0.0, d.converged};
    };
    IsingThreshold out = bisect(lo, hi, tol, probe, "critical field");
    out.below = dh(out.lo).value;
    out.above = dh(out.hi).value;
    return out;
}

IsingThreshold find_boundary_transition(double beta, double h_bulk, double lo, double hi, int n_br,
                                        double tol, double eps) {
    auto response = [&](double h_leaf) {
        return boundary_field_scan(beta, h_bulk, {h_leaf}, n_br).front();
    };
    auto probe = [&](double h_leaf) {
        const BoundaryFieldRow row = response(h_leaf);
        return std::pair{row.response > eps ? 1.0 : 0.0, row.converged};
    };
    IsingThreshold out = bisect(lo, hi, tol, probe, "boundary transition");
    out.below = response(out.lo).response;
    out.above = response(out.hi).response;
    return out;
}

}  // namespace arbor
