// One line per criterion: "criterion <id>: PASS|FAIL <detail>". Exit status is
// nonzero if any requested criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "arbor/dense_oracle.h"
#include "arbor/ising.h"
#include "arbor/markov.h"
#include "arbor/oracle.h"
#include "arbor/threshold.h"
#include "arbor/tree_sim.h"

using namespace arbor;
using enum CState;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    double budget_s;
    std::function<Verdict()> run;
};

std::string fmt(double v, int digits = 7) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

// Same phase at both ends of the allowed eps range.
bool eps_stable(const CStateDist& d) { return classify_dist(d, 1e-10) == classify_dist(d, 1e-7); }

bool eps_stable(const std::vector<PhasePoint>& pts) {
    for (const PhasePoint& pt : pts) {
        if (!pt.fp.converged || !eps_stable(pt.fp.dist)) {
            return false;
        }
    }
    return true;
}

const GateParams kClifford = GateParams::clifford();

Verdict mipt_threshold() {
    const ThresholdResult t = find_threshold(single_step_family(kClifford, {}, Axis::P), Axis::P, 0.0, 0.3,
                                             PhaseRegion::Quantum, {.tol = 1e-6});
    const double err = std::abs(t.value - 1.0 / 6.0);
    const bool ok = err <= 1e-6 && t.order == TransitionOrder::Continuous;
    return {ok, "p_c=" + fmt(t.value, 9) + " |err|=" + fmt(err, 2) + " order=" + std::string(to_string(t.order))};
}

Verdict closed_form() {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double p = (1.0 / 6.0) * i / 50.0;
        const FixedPointResult fp = iterate(Protocol::single_step(kClifford, {p, 0.0}));
        if (!fp.converged) {
            return {false, "unconverged at p=" + fmt(p)};
        }
        worst = std::max(worst, std::abs(fp.dist.p2() - mipt_fixed_point_closed_form(p, kClifford.alpha)));
    }
    const double at = iterate(Protocol::single_step(kClifford, {0.1, 0.0})).dist.p2();
    const double cf = mipt_fixed_point_closed_form(0.1, kClifford.alpha);
    const bool ok = worst <= 1e-10 && std::abs(at - 0.493827) < 5e-7 && std::abs(cf - 0.493827) < 5e-7;
    return {ok, "max|iterate-closed|=" + fmt(worst, 2) + " P(0.1)=" + fmt(at) + "/" + fmt(cf)};
}

Verdict noise_threshold() {
    const ProtocolFamily fam = single_step_family(kClifford, {}, Axis::R);
    const ThresholdOptions o{.tol = 1e-7};
    const ThresholdResult q = find_threshold(fam, Axis::R, 0.0, 0.05, PhaseRegion::Quantum, o);
    const ThresholdResult c = find_threshold(fam, Axis::R, 0.0, 0.05, PhaseRegion::ClassicalOrBetter, o);
    const bool stable = eps_stable(iterate(fam(q.lo)).dist) && eps_stable(iterate(fam(q.hi)).dist);
    const bool ok = std::abs(q.value - 0.0225) <= 5e-4 && std::abs(q.value - c.value) <= o.tol && stable;
    return {ok, "r_c(2)=" + fmt(q.value) + " r_c(1)=" + fmt(c.value) + " target 0.0225+-5e-4"};
}

Verdict first_order() {
    const ThresholdOptions o{.tol = 1e-6};
    const ThresholdResult noisy = find_threshold(single_step_family(kClifford, {0.0, 0.01}, Axis::P), Axis::P,
                                                 0.0, 0.3, PhaseRegion::Quantum, o);
    const ThresholdResult clean = find_threshold(single_step_family(kClifford, {}, Axis::P), Axis::P, 0.0, 0.3,
                                                 PhaseRegion::Quantum, o);
    const bool ok = noisy.jump > 0.1 && clean.jump < 0.01;
    return {ok, "jump(r=0.01)=" + fmt(noisy.jump, 4) + " at p=" + fmt(noisy.value) +
                    " jump(r=0)=" + fmt(clean.jump, 2)};
}

Verdict tuned_ensemble() {
    const GateParams g{0.4, 1.0 / 3.0, 0.5};
    const FixedPointResult at = iterate(Protocol::single_step(g, {0.0, 0.01}));
    const ThresholdResult t = find_threshold(single_step_family(g, {}, Axis::R), Axis::R, 0.001, 0.3,
                                             PhaseRegion::ClassicalOrBetter, {.tol = 1e-6});
    const double err = std::abs(t.value - 1.0 / 6.0);
    const bool ok = at.converged && at.dist.p2() < 1e-9 && eps_stable(at.dist) && err <= 1e-6 &&
                    t.order == TransitionOrder::Continuous;
    return {ok, "P2(r=0.01)=" + fmt(at.dist.p2(), 3) + " r_c(1)=" + fmt(t.value, 9) + " order=" +
                    std::string(to_string(t.order))};
}

Verdict self_dual() {
    const GateParams g{0.5, 1.0 / 3.0, 0.5};
    const std::vector<double> grid = linspace(0.0, 1.0, 21);
    const auto rows = boundary_noise_scan(grid, g, {});
    bool consistent = true;
    for (const BoundaryRow& row : rows) {
        const bool quantum = row.fp.dist.p2() > kDefaultPhaseEps;
        const bool stable = row.fp.converged && eps_stable(row.fp.dist);
        // The self-dual point itself is the boundary; skip it.
        if (row.r_leaves != 0.5 && (quantum != (row.r_leaves < 0.5) || !stable)) {
            consistent = false;
        }
    }
    const ThresholdResult t = find_threshold(single_step_family(g, {}, Axis::RLeaves), Axis::RLeaves, 0.0, 0.9,
                                             PhaseRegion::Quantum, {.tol = 1e-6});
    const double p1 = boundary_noise_scan({0.99}, g, {}).front().fp.dist.p1();
    const bool ok = consistent && std::abs(t.value - 0.5) <= 1e-6 && p1 > kDefaultPhaseEps;
    return {ok, "r_leaves^c(2)=" + fmt(t.value, 9) + " grid " + (consistent ? "consistent" : "inconsistent") +
                    " P1(0.99)=" + fmt(p1, 4)};
}

Verdict multistep() {
    MultistepParams m;
    m.r = 0.005;
    const ProtocolFamily fam = m.family(Axis::RLeaves);
    const ThresholdOptions o{.tol = 1e-6};
    const ThresholdResult q = find_threshold(fam, Axis::RLeaves, 0.0, 1.0, PhaseRegion::Quantum, o);
    const ThresholdResult c = find_threshold(fam, Axis::RLeaves, 0.0, 0.99, PhaseRegion::ClassicalOrBetter, o);
    const auto pts = multistep_scan(m, Axis::RLeaves, linspace(0.0, 0.99, 100));
    double lo = 1.0, hi = 0.0;
    for (const PhasePoint& pt : pts) {
        if (pt.phase == Phase::Quantum) {
            lo = std::min(lo, pt.fp.dist.p2());
            hi = std::max(hi, pt.fp.dist.p2());
        }
    }
    const double spread = hi - lo;
    const bool ok = std::abs(q.value - 0.184) <= 2e-3 && std::abs(c.value - 0.751) <= 2e-3 && spread <= 1e-9 &&
                    eps_stable(pts);
    return {ok, "r_leaves^c(2)=" + fmt(q.value, 5) + " r_leaves^c(1)=" + fmt(c.value, 5) +
                    " P2 spread in quantum phase=" + fmt(spread, 2)};
}

Verdict ising_beta() {
    const IsingThreshold t = find_critical_tanh_beta(2, 0.3, 0.8, 1e-6, 1e-9);
    const double err = std::abs(t.value - 0.5);
    return {err <= 1e-6, "tanh(beta_c)=" + fmt(t.value, 9) + " |err|=" + fmt(err, 2)};
}

Verdict ising_field() {
    const IsingThreshold t = find_critical_field(1.0, 2, 0.0, 1.0, 1e-6, 1e-6);
    const double jump = t.below - t.above;
    const bool ok = std::abs(t.value - 0.323) <= 2e-3 && jump > 0.01;
    return {ok, "h_c=" + fmt(t.value, 6) + " target 0.323+-2e-3, jump in delta_h=" + fmt(jump, 4)};
}

Verdict oracle_closure() {
    std::vector<std::string> bad;
    if (enumerate_symplectic_group().size() != 720) {
        bad.push_back("group order");
    }
    const ExactW w = compute_w_exact(uniform_ensemble());
    if (w.alpha != Rational(3, 5) || w.beta != Rational(1, 3) || w.gamma != Rational(1, 2) ||
        w.at(Sigma, Mixed, Sigma) != Rational(2, 5)) {
        bad.push_back("exact parameters");
    }
    const TransitionMatrix closed = build_transition_matrix(kClifford);
    for (CState a : kAllCStates) {
        for (CState b : kAllCStates) {
            for (CState c : kAllCStates) {
                if (std::abs(w.at(a, b, c).to_double() - closed(a, b, c)) > 1e-15) {
                    bad.push_back("entry mismatch");
                }
            }
        }
    }
    const PurificationReport pur = verify_purification_equivalence(uniform_ensemble());
    if (!pur.ok() || pur.gates_checked != 720) {
        bad.push_back("purification");
    }
    for (const Rational alpha : {Rational(0), Rational(1)}) {
        const ExactW d = compute_w_exact(deterministic_mixture(alpha));
        if (d.alpha != alpha || d.beta != Rational(0) || d.gamma != Rational(0)) {
            bad.push_back("deterministic gate alpha=" + alpha.to_string());
        }
    }
    std::string detail = "alpha=" + w.alpha.to_string() + " beta=" + w.beta.to_string() +
                         " gamma=" + w.gamma.to_string() + " W(sigma,M->sigma)=" +
                         w.at(Sigma, Mixed, Sigma).to_string();
    for (const auto& b : bad) {
        detail += "; " + b;
    }
    return {bad.empty(), detail};
}

Verdict monte_carlo() {
    double worst = 0.0;
    bool ok = true;
    std::uint64_t seed = 1000;
    for (const NoiseParams n : {NoiseParams{0.3, 0.0}, NoiseParams{0.0, 0.05}, NoiseParams{0.1, 0.02}}) {
        TreeSimConfig cfg;
        cfg.depth = 4;
        cfg.noise = n;
        cfg.trials = 100000;
        cfg.seed = seed++;
        const TreeSimResult sim = simulate_tree(cfg);
        const CStateDist predicted = evolve(Protocol::single_step(kClifford, n), 4);
        for (CState c : kAllCStates) {
            const double se = sim.standard_error_at(predicted[c]);
            const double diff = std::abs(sim.frequency(c) - predicted[c]);
            if (se == 0.0) {
                ok = ok && diff == 0.0;
            } else {
                worst = std::max(worst, diff / se);
            }
        }
    }
    ok = ok && worst <= 3.0;
    return {ok, "3 noise points x 1e5 trials, max |z|=" + fmt(worst, 3)};
}

Verdict dense_equivalence() {
    DenseCheckOptions o;
    o.sequences = 1000;
    o.max_qubits = 4;
    const DenseCheckReport r = check_tableau_against_dense(o);
    std::string detail = std::to_string(r.sequences) + " sequences, " + std::to_string(r.entropy_checks) +
                         " entropies, " + std::to_string(r.probability_checks) + " probabilities, worst frequency " +
                         fmt(r.worst_frequency_sigma, 3) + " sigma";
    if (!r.ok()) {
        detail += "; " + r.failures.front();
    }
    return {r.ok() && r.sequences == 1000, detail};
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"1", 5, mipt_threshold},     {"2", 5, closed_form},       {"3", 30, noise_threshold},
        {"4", 30, first_order},       {"5", 10, tuned_ensemble},   {"6", 10, self_dual},
        {"7", 30, multistep},         {"8a", 5, ising_beta},       {"8b", 5, ising_field},
        {"9", 60, oracle_closure},    {"10", 600, monte_carlo},    {"11", 120, dense_equivalence},
    };
    return all;
}

bool run_one(const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = c.run();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = v.pass && in_time;
    std::printf("criterion %s: %s %s (%.2f s, budget %.0f s%s)\n", c.id.c_str(), pass ? "PASS" : "FAIL",
                v.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> wanted(argv + 1, argv + argc);
    if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
        wanted.clear();
        for (const Criterion& c : criteria()) {
            wanted.push_back(c.id);
        }
    }
    bool all_pass = true;
    for (const std::string& id : wanted) {
        const Criterion* found = nullptr;
        for (const Criterion& c : criteria()) {
            if (c.id == id) {
                found = &c;
            }
        }
        if (found == nullptr) {
            std::fprintf(stderr, "unknown criterion '%s'\n", id.c_str());
            return 2;
        }
        all_pass = run_one(*found) && all_pass;
    }
    return all_pass ? 0 : 1;
}
