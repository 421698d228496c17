#include "cli.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "arbor/dense_oracle.h"
#include "arbor/ising.h"
#include "arbor/markov.h"
#include "arbor/oracle.h"
#include "arbor/threshold.h"
#include "arbor/tree_sim.h"
#include "output.h"

#ifndef ARBOR_VERSION
#define ARBOR_VERSION "0.0.0"
#endif

namespace arbor::cli {
namespace {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config;
    std::string out = "-";
    std::string format;  // empty: the command's default
    std::string plot = "none";
    unsigned long long seed = kDefaultSeed;
    double tol = 1e-6;
    double eps = kDefaultPhaseEps;
    std::size_t grid = 41;
};

struct Plot {
    enum Kind { None, Lines, Map } kind = None;
    std::string x;
    std::vector<std::string> ys;  // Lines: curves; Map: {y, label}
    std::string title;
};

// Registers options and remembers how to echo their final values.
class Options {
   public:
    explicit Options(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* add(const std::string& name, T& var, const std::string& help) {
        echo_.emplace_back(name, [&var] { return json(var); });
        return app_->add_option("--" + name, var, help)->capture_default_str();
    }

    json echo() const {
        json out = json::object();
        for (const auto& [name, get] : echo_) {
            out[name] = get();
        }
        return out;
    }

   private:
    CLI::App* app_;
    std::vector<std::pair<std::string, std::function<json()>>> echo_;
};

class Command {
   public:
    Command(CLI::App& parent, const std::string& name, const std::string& help, Common& common)
        : app(parent.add_subcommand(name, help)), opts(app), common_(common) {
        opts.add("config", common.config, "JSON file with option values (flags win)");
        opts.add("out", common.out, "Output file, '-' for stdout");
        opts.add("format", common.format, "csv or json")->check(CLI::IsMember({"", "csv", "json"}));
        opts.add("plot", common.plot, "none, svg (next to --out) or ascii (stderr)")
            ->check(CLI::IsMember({"none", "svg", "ascii"}));
        opts.add("seed", common.seed, "RNG seed");
        opts.add("tol", common.tol, "Bisection bracket width");
        opts.add("eps", common.eps, "Order-parameter threshold");
        opts.add("grid", common.grid, "Points per a:b range");
    }
    virtual ~Command() = default;

    virtual Table execute() = 0;
    virtual std::string default_format() const { return "csv"; }
    virtual Plot plot() const { return {}; }
    virtual int status() const { return kOk; }

    CLI::App* app;
    Options opts;

   protected:
    const Common& common() const { return common_; }
    std::vector<double> range(const std::string& text, const std::string& name) const {
        try {
            return parse_range(text, common_.grid);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("--" + name + ": " + e.what());
        }
    }
    double scalar(const std::string& text, const std::string& name) const {
        const std::vector<double> v = range(text, name);
        if (v.size() != 1) {
            throw std::invalid_argument("--" + name + " must be a single value here");
        }
        return v.front();
    }

   private:
    const Common& common_;
};

void require_unit(const std::vector<double>& xs, const std::string& name) {
    for (double x : xs) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::invalid_argument("--" + name + " values must lie in [0,1]");
        }
    }
}

void validate_common(const Common& c) {
    if (!(c.tol > 0.0) || !std::isfinite(c.tol)) {
        throw std::invalid_argument("--tol must be positive");
    }
    if (!(c.eps > 0.0) || !std::isfinite(c.eps)) {
        throw std::invalid_argument("--eps must be positive");
    }
    if (c.grid < 1) {
        throw std::invalid_argument("--grid must be at least 1");
    }
}

// --- Markov commands -------------------------------------------------------

std::vector<PhasePoint> evaluate_line(const std::vector<double>& xs, const ProtocolFamily& family,
                                      std::size_t depth, double eps) {
    SweepOptions so;
    so.eps = eps;
    if (depth == 0) {
        return sweep_line(xs, family, so);
    }
    std::vector<PhasePoint> out(xs.size());
    parallel_for(xs.size(), so.threads, [&](std::size_t i) {
        FixedPointResult fp;
        fp.dist = evolve(family(xs[i]), depth);
        fp.iterations = depth;
        fp.converged = true;
        out[i] = PhasePoint{xs[i], 0.0, fp, classify_dist(fp.dist, eps)};
    });
    return out;
}

Cell phase_cell(const std::optional<Phase>& phase) {
    return phase ? std::string(to_string(*phase)) : std::string("unconverged");
}

// Index pairs of consecutive usable points whose predicate differs.
std::vector<std::pair<std::size_t, std::size_t>> crossings(const std::vector<double>& xs,
                                                           const std::vector<std::optional<bool>>& pred) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!pred[i]) {
            continue;
        }
        if (last && *pred[*last] != *pred[i] && xs[*last] != xs[i]) {
            out.emplace_back(*last, i);
        }
        last = i;
    }
    return out;
}

json markov_thresholds(const std::vector<PhasePoint>& pts, const ProtocolFamily& family, Axis axis,
                       const std::vector<std::pair<PhaseRegion, const char*>>& regions, const Common& c) {
    json out = json::array();
    std::vector<double> xs;
    for (const PhasePoint& pt : pts) {
        xs.push_back(pt.x);
    }
    for (const auto& [region, quantity] : regions) {
        std::vector<std::optional<bool>> pred;
        for (const PhasePoint& pt : pts) {
            pred.push_back(pt.phase ? std::optional<bool>(in_region(*pt.phase, region)) : std::nullopt);
        }
        for (const auto& [i, j] : crossings(xs, pred)) {
            ThresholdOptions o;
            o.tol = c.tol;
            o.eps = c.eps;
            const ThresholdResult t = find_threshold(family, axis, xs[i], xs[j], region, o);
            json rec;
            rec["quantity"] = quantity;
            rec["axis"] = to_string(axis);
            rec["value"] = t.value;
            rec["lo"] = t.lo;
            rec["hi"] = t.hi;
            rec["order"] = to_string(t.order);
            rec["jump"] = t.jump;
            rec["probes"] = t.probes;
            rec["unconverged_probes"] = t.unconverged_probes;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

class GateOptions {
   public:
    void add(Options& opts) {
        opts.add("alpha", gate.alpha, "P(2 survives a (2,1) node)");
        opts.add("beta", gate.beta, "Gate parameter beta");
        opts.add("gamma", gate.gamma, "Gate parameter gamma");
    }
    GateParams gate = GateParams::clifford();
};

class MiptCommand : public Command {
   public:
    explicit MiptCommand(CLI::App& parent, Common& c)
        : Command(parent, "mipt", "Measurement-only sweep over p at r = 0", c) {
        gate_.add(opts);
        opts.add("p", p_, "Measurement rates");
        opts.add("depth", depth_, "Finite tree depth, 0 for the fixed point");
    }

    Table execute() override {
        gate_.gate.validate();
        const std::vector<double> ps = range(p_, "p");
        require_unit(ps, "p");
        const ProtocolFamily family = single_step_family(gate_.gate, NoiseParams{}, Axis::P);
        const auto pts = evaluate_line(ps, family, depth_, common().eps);
        Table t;
        t.columns = {"p", "P2", "Psigma", "I_mean", "converged"};
        for (const PhasePoint& pt : pts) {
            const CStateDist& d = pt.fp.dist;
            t.add_row({pt.x, d.p2(), d.psigma(), mean_mutual_information(d), pt.fp.converged});
        }
        if (depth_ == 0) {
            t.metadata["thresholds"] =
                markov_thresholds(pts, family, Axis::P, {{PhaseRegion::Quantum, "P2"}}, common());
        }
        return t;
    }

    Plot plot() const override { return {Plot::Lines, "p", {"P2", "Psigma"}, "fixed point vs p"}; }

   private:
    GateOptions gate_;
    std::string p_ = "0:0.3";
    std::size_t depth_ = 0;
};

const std::vector<std::string> kDistColumns = {"P2", "P1", "Psigma", "PM"};

std::vector<Cell> dist_cells(const CStateDist& d) { return {d.p2(), d.p1(), d.psigma(), d.pm()}; }

const std::vector<std::pair<PhaseRegion, const char*>> kBothRegions = {
    {PhaseRegion::Quantum, "P2"}, {PhaseRegion::ClassicalOrBetter, "P2+P1"}};

class NoisyCommand : public Command {
   public:
    explicit NoisyCommand(CLI::App& parent, Common& c)
        : Command(parent, "noisy", "Sweep over the decoherence rate r", c) {
        gate_.add(opts);
        opts.add("p", p_, "Measurement rate");
        opts.add("r", r_, "Decoherence rates");
        opts.add("depth", depth_, "Finite tree depth, 0 for the fixed point");
    }

    Table execute() override {
        gate_.gate.validate();
        NoiseParams{p_, 0.0}.validate();
        const std::vector<double> rs = range(r_, "r");
        require_unit(rs, "r");
        const ProtocolFamily family = single_step_family(gate_.gate, NoiseParams{p_, 0.0}, Axis::R);
        const auto pts = evaluate_line(rs, family, depth_, common().eps);
        Table t;
        t.columns = {"r", "P2", "P1", "Psigma", "PM", "converged", "phase"};
        for (const PhasePoint& pt : pts) {
            std::vector<Cell> row{pt.x};
            for (Cell& c : dist_cells(pt.fp.dist)) {
                row.push_back(std::move(c));
            }
            row.push_back(pt.fp.converged);
            row.push_back(phase_cell(pt.phase));
            t.add_row(std::move(row));
        }
        if (depth_ == 0) {
            t.metadata["thresholds"] = markov_thresholds(pts, family, Axis::R, kBothRegions, common());
        }
        return t;
    }

    Plot plot() const override { return {Plot::Lines, "r", kDistColumns, "fixed point vs r"}; }

   private:
    GateOptions gate_;
    double p_ = 0.0;
    std::string r_ = "0:0.04";
    std::size_t depth_ = 0;
};

class PhaseDiagramCommand : public Command {
   public:
    explicit PhaseDiagramCommand(CLI::App& parent, Common& c)
        : Command(parent, "phase-diagram", "Phases over the (p, r) plane", c) {
        gate_.add(opts);
        opts.add("p", p_, "Measurement rates");
        opts.add("r", r_, "Decoherence rates");
        opts.add("depth", depth_, "Finite tree depth, 0 for the fixed point");
    }

    Table execute() override {
        gate_.gate.validate();
        const std::vector<double> ps = range(p_, "p");
        const std::vector<double> rs = range(r_, "r");
        require_unit(ps, "p");
        require_unit(rs, "r");
        const ProtocolFamily2D family = noise_plane(gate_.gate);
        SweepOptions so;
        so.eps = common().eps;
        PhaseDiagram diagram;
        if (depth_ == 0) {
            diagram = sweep_grid(ps, rs, family, so);
        } else {
            diagram.xs = ps;
            diagram.ys = rs;
            diagram.points.resize(ps.size() * rs.size());
            parallel_for(diagram.points.size(), so.threads, [&](std::size_t k) {
                const double p = ps[k % ps.size()];
                const double r = rs[k / ps.size()];
                FixedPointResult fp;
                fp.dist = evolve(family(p, r), depth_);
                fp.iterations = depth_;
                fp.converged = true;
                diagram.points[k] = PhasePoint{p, r, fp, classify_dist(fp.dist, so.eps)};
            });
        }
        Table t;
        t.columns = {"p", "r", "P2", "P1", "Psigma", "PM", "phase", "converged"};
        for (const PhasePoint& pt : diagram.points) {
            std::vector<Cell> row{pt.x, pt.y};
            for (Cell& c : dist_cells(pt.fp.dist)) {
                row.push_back(std::move(c));
            }
            row.push_back(phase_cell(pt.phase));
            row.push_back(pt.fp.converged);
            t.add_row(std::move(row));
        }
        return t;
    }

    Plot plot() const override { return {Plot::Map, "p", {"r", "phase"}, "phases in the (p, r) plane"}; }

   private:
    GateOptions gate_;
    std::string p_ = "0:0.3";
    std::string r_ = "0:0.05";
    std::size_t depth_ = 0;
};

Table r_leaves_table(const std::vector<PhasePoint>& pts) {
    Table t;
    t.columns = {"r_leaves", "P2", "P1", "Psigma", "PM", "phase", "converged"};
    for (const PhasePoint& pt : pts) {
        std::vector<Cell> row{pt.x};
        for (Cell& c : dist_cells(pt.fp.dist)) {
            row.push_back(std::move(c));
        }
        row.push_back(phase_cell(pt.phase));
        row.push_back(pt.fp.converged);
        t.add_row(std::move(row));
    }
    return t;
}

class BoundaryCommand : public Command {
   public:
    explicit BoundaryCommand(CLI::App& parent, Common& c)
        : Command(parent, "boundary", "Decoherence on the leaves only", c) {
        gate_.gate = GateParams{0.5, 1.0 / 3.0, 0.5};
        gate_.add(opts);
        opts.add("p", p_, "Bulk measurement rate");
        opts.add("r", r_, "Bulk decoherence rate");
        opts.add("r-leaves", r_leaves_, "Leaf decoherence rates");
        opts.add("depth", depth_, "Finite tree depth, 0 for the fixed point");
    }

    Table execute() override {
        gate_.gate.validate();
        const NoiseParams n{p_, r_};
        n.validate();
        const std::vector<double> rl = range(r_leaves_, "r-leaves");
        require_unit(rl, "r-leaves");
        const ProtocolFamily family = single_step_family(gate_.gate, n, Axis::RLeaves);
        const auto pts = evaluate_line(rl, family, depth_, common().eps);
        Table t = r_leaves_table(pts);
        if (depth_ == 0) {
            t.metadata["thresholds"] = markov_thresholds(pts, family, Axis::RLeaves, kBothRegions, common());
        }
        return t;
    }

    Plot plot() const override { return {Plot::Lines, "r_leaves", kDistColumns, "fixed point vs r_leaves"}; }

   private:
    GateOptions gate_;
    double p_ = 0.0;
    double r_ = 0.0;
    std::string r_leaves_ = "0:1";
    std::size_t depth_ = 0;
};

class MultistepCommand : public Command {
   public:
    explicit MultistepCommand(CLI::App& parent, Common& c)
        : Command(parent, "multistep", "Two-step schedule with leaf decoherence", c) {
        params_.r = 0.005;
        opts.add("alpha-even", params_.alpha_even, "alpha on the first layer and every other one");
        opts.add("alpha-odd", params_.alpha_odd, "alpha on the remaining layers");
        opts.add("beta", params_.beta, "Gate parameter beta");
        opts.add("gamma", params_.gamma, "Gate parameter gamma");
        opts.add("p", params_.p, "Bulk measurement rate");
        opts.add("r", params_.r, "Bulk decoherence rate");
        opts.add("r-leaves", r_leaves_, "Leaf decoherence rates");
        opts.add("depth", depth_, "Finite tree depth, 0 for the fixed point");
    }

    Table execute() override {
        for (const Layer& l : params_.schedule()) {
            l.gate.validate();
            l.noise.validate();
        }
        const std::vector<double> rl = range(r_leaves_, "r-leaves");
        require_unit(rl, "r-leaves");
        const ProtocolFamily family = params_.family(Axis::RLeaves);
        const auto pts = evaluate_line(rl, family, depth_, common().eps);
        Table t = r_leaves_table(pts);
        if (depth_ == 0) {
            t.metadata["thresholds"] = markov_thresholds(pts, family, Axis::RLeaves, kBothRegions, common());
        }
        return t;
    }

    Plot plot() const override { return {Plot::Lines, "r_leaves", kDistColumns, "two-step fixed point"}; }

   private:
    MultistepParams params_;
    std::string r_leaves_ = "0:1";
    std::size_t depth_ = 0;
};

// --- Ising -----------------------------------------------------------------

class IsingCommand : public Command {
   public:
    explicit IsingCommand(CLI::App& parent, Common& c)
        : Command(parent, "ising", "Ising model on a tree: beta, field or leaf-field scans", c) {
        opts.add("mode", mode_, "beta, field or leaves")->check(CLI::IsMember({"beta", "field", "leaves"}));
        opts.add("beta", beta_, "Inverse temperature (a range in beta mode)");
        opts.add("field", h_, "Bulk field h (a range in field mode)");
        opts.add("leaf-field", h_leaf_, "Leaf fields (leaves mode)");
        opts.add("n-br", n_br_, "Branching number");
        opts.add("depth", depth_, "Finite depth, 0 for the fixed point");
    }

    Table execute() override {
        if (mode_ != "leaves" && !h_leaf_.empty()) {
            throw std::invalid_argument("--leaf-field only applies to --mode leaves");
        }
        if (mode_ == "beta") {
            return beta_scan();
        }
        if (mode_ == "field") {
            return field_scan();
        }
        return leaf_scan();
    }

    Plot plot() const override {
        if (mode_ == "beta") {
            return {Plot::Lines, "tanh_beta", {"delta_h"}, "root field splitting vs tanh(beta)"};
        }
        if (mode_ == "field") {
            return {Plot::Lines, "h", {"delta_h"}, "root field splitting vs h"};
        }
        return {Plot::Lines, "h_leaf", {"response"}, "boundary response vs h_leaf"};
    }

   private:
    std::optional<std::size_t> depth() const {
        return depth_ == 0 ? std::nullopt : std::optional<std::size_t>(depth_);
    }

    static json record(const char* quantity, const char* axis, const IsingThreshold& t) {
        json rec;
        rec["quantity"] = quantity;
        rec["axis"] = axis;
        rec["value"] = t.value;
        rec["lo"] = t.lo;
        rec["hi"] = t.hi;
        rec["below"] = t.below;
        rec["above"] = t.above;
        rec["probes"] = t.probes;
        rec["unconverged_probes"] = t.unconverged_probes;
        return rec;
    }

    Table beta_scan() {
        const std::vector<double> betas = range(beta_.empty() ? "0:1.5" : beta_, "beta");
        const double h = scalar(h_.empty() ? "0" : h_, "field");
        Table t;
        t.columns = {"beta", "tanh_beta", "delta_h", "converged"};
        std::vector<double> xs;
        std::vector<std::optional<bool>> ordered;
        for (double b : betas) {
            const IsingParams params{b, h, n_br_};
            params.validate();
            const DeltaH d = delta_h_root(params, depth());
            t.add_row({b, std::tanh(b), d.value, d.converged});
            xs.push_back(std::tanh(b));
            ordered.push_back(d.converged ? std::optional<bool>(d.value > common().eps) : std::nullopt);
        }
        json found = json::array();
        if (h == 0.0 && depth_ == 0) {
            for (const auto& [i, j] : crossings(xs, ordered)) {
                const IsingThreshold th = find_critical_tanh_beta(n_br_, std::min(xs[i], xs[j]),
                                                                  std::max(xs[i], xs[j]), common().tol,
                                                                  common().eps);
                json rec = record("delta_h", "tanh_beta", th);
                rec["beta"] = std::atanh(th.value);
                found.push_back(std::move(rec));
            }
        }
        t.metadata["thresholds"] = std::move(found);
        return t;
    }

    Table field_scan() {
        const double beta = scalar(beta_.empty() ? "1" : beta_, "beta");
        const std::vector<double> hs = range(h_.empty() ? "0:0.6" : h_, "field");
        Table t;
        t.columns = {"h", "delta_h", "h_up", "h_down", "converged"};
        std::vector<std::optional<bool>> ordered;
        for (double h : hs) {
            const IsingParams params{beta, h, n_br_};
            params.validate();
            const DeltaH d = delta_h_root(params, depth());
            t.add_row({h, d.value, d.up, d.down, d.converged});
            ordered.push_back(d.converged ? std::optional<bool>(d.value > common().eps) : std::nullopt);
        }
        json found = json::array();
        if (depth_ == 0) {
            for (const auto& [i, j] : crossings(hs, ordered)) {
                found.push_back(record("delta_h", "h",
                                       find_critical_field(beta, n_br_, std::min(hs[i], hs[j]),
                                                           std::max(hs[i], hs[j]), common().tol,
                                                           common().eps)));
            }
        }
        t.metadata["thresholds"] = std::move(found);
        return t;
    }

    Table leaf_scan() {
        const double beta = scalar(beta_.empty() ? "10" : beta_, "beta");
        const double h = scalar(h_.empty() ? "0.1" : h_, "field");
        const std::vector<double> leaves = range(h_leaf_.empty() ? "-1:1" : h_leaf_, "leaf-field");
        IsingParams{beta, h, n_br_}.validate();
        if (depth_ != 0) {
            throw std::invalid_argument("--depth is not supported in leaves mode");
        }
        const std::vector<BoundaryFieldRow> rows = boundary_field_scan(beta, h, leaves, n_br_);
        Table t;
        t.columns = {"h_leaf", "h_root", "response", "converged"};
        std::vector<std::optional<bool>> responds;
        for (const BoundaryFieldRow& row : rows) {
            t.add_row({row.h_leaf, row.h_root, row.response, row.converged});
            responds.push_back(row.converged ? std::optional<bool>(row.response > common().eps)
                                             : std::nullopt);
        }
        json found = json::array();
        for (const auto& [i, j] : crossings(leaves, responds)) {
            found.push_back(record("response", "h_leaf",
                                   find_boundary_transition(beta, h, std::min(leaves[i], leaves[j]),
                                                            std::max(leaves[i], leaves[j]), n_br_,
                                                            common().tol, common().eps)));
        }
        t.metadata["thresholds"] = std::move(found);
        return t;
    }

    std::string mode_ = "beta";
    std::string beta_;
    std::string h_;
    std::string h_leaf_;
    int n_br_ = 2;
    std::size_t depth_ = 0;
};

// --- verify ----------------------------------------------------------------

class VerifyCommand : public Command {
   public:
    explicit VerifyCommand(CLI::App& parent, Common& c)
        : Command(parent, "verify", "Cross-check the recursion against the stabilizer oracle", c) {
        opts.add("sequences", sequences_, "Random sequences for the dense comparison");
        opts.add("depth", depth_, "Tree depth for the Monte Carlo comparison (1-4)");
        opts.add("trials", trials_, "Monte Carlo trials per noise point");
        opts.add("inject-fault", fault_, "Perturb reference entry W((a,b)->c), e.g. 2,M,1");
    }

    std::string default_format() const override { return "json"; }
    int status() const override { return failed_ ? kVerificationFailure : kOk; }

    Table execute() override {
        if (depth_ < 1 || depth_ > 4) {
            throw std::invalid_argument("--depth must be between 1 and 4");
        }
        if (trials_ < 1) {
            throw std::invalid_argument("--trials must be positive");
        }
        const std::optional<std::array<CState, 3>> fault = parse_fault();
        table_.columns = {"check", "passed", "detail"};
        check("dense_equivalence", [&] { return dense(); });
        check("group_order", [&] { return group_order(); });
        check("exact_w_uniform", [&] { return exact_uniform(fault); });
        check("purification", [&] { return purification(); });
        check("deterministic_gate_alpha0", [&] { return deterministic(Rational(0)); });
        check("deterministic_gate_alpha1", [&] { return deterministic(Rational(1)); });
        for (const NoiseParams& n : {NoiseParams{0.3, 0.0}, NoiseParams{0.0, 0.05}, NoiseParams{0.1, 0.02}}) {
            std::ostringstream name;
            name << "tree_vs_recursion p=" << format_double(n.p) << " r=" << format_double(n.r);
            check(name.str(), [&] { return tree(n); });
        }
        table_.metadata["exact"] = exact_;
        return std::move(table_);
    }

   private:
    using Outcome = std::pair<bool, std::string>;

    void check(const std::string& name, const std::function<Outcome()>& body) {
        Outcome r;
        try {
            r = body();
        } catch (const InvariantViolation& e) {
            r = {false, std::string("invariant violated: ") + e.what()};
        }
        failed_ = failed_ || !r.first;
        table_.add_row({name, r.first, r.second});
    }

    std::optional<std::array<CState, 3>> parse_fault() const {
        if (fault_.empty()) {
            return std::nullopt;
        }
        std::array<CState, 3> out{};
        std::stringstream ss(fault_);
        std::string part;
        std::size_t k = 0;
        while (std::getline(ss, part, ',')) {
            if (k == 3) {
                throw std::invalid_argument("--inject-fault takes three c-states a,b,c");
            }
            out[k++] = cstate_from_string(part);
        }
        if (k != 3) {
            throw std::invalid_argument("--inject-fault takes three c-states a,b,c");
        }
        return out;
    }

    Outcome dense() const {
        DenseCheckOptions o;
        o.sequences = sequences_;
        o.seed = common().seed;
        const DenseCheckReport r = check_tableau_against_dense(o);
        std::ostringstream d;
        d << r.sequences << " sequences, " << r.entropy_checks << " entropies, " << r.probability_checks
          << " probabilities, " << r.frequency_checks << " frequency checks (worst "
          << format_double(std::round(r.worst_frequency_sigma * 100) / 100) << " sigma)";
        if (!r.ok()) {
            d << "; first failure: " << r.failures.front();
        }
        return {r.ok(), d.str()};
    }

    static Outcome group_order() {
        const std::size_t n = enumerate_symplectic_group().size();
        return {n == 720, std::to_string(n) + " symplectic classes"};
    }

    static std::string w_name(CState a, CState b, CState c) {
        return "W((" + std::string(to_string(a)) + "," + std::string(to_string(b)) + ")->" +
               std::string(to_string(c)) + ")";
    }

    Outcome exact_uniform(const std::optional<std::array<CState, 3>>& fault) {
        const ExactW w = compute_w_exact(uniform_ensemble());
        TransitionMatrix reference = build_transition_matrix(GateParams::clifford());
        if (fault) {
            const auto [a, b, c] = *fault;
            reference.set(a, b, c, reference(a, b, c) + 0.125);
        }
        using enum CState;
        exact_["alpha"] = w.alpha.to_string();
        exact_["beta"] = w.beta.to_string();
        exact_["gamma"] = w.gamma.to_string();
        exact_["W(sigma,M->sigma)"] = w.at(Sigma, Mixed, Sigma).to_string();
        std::vector<std::string> bad;
        for (CState a : kAllCStates) {
            for (CState b : kAllCStates) {
                for (CState c : kAllCStates) {
                    if (index_of(b) < index_of(a)) {
                        continue;
                    }
                    if (std::abs(w.at(a, b, c).to_double() - reference(a, b, c)) > 1e-15) {
                        bad.push_back(w_name(a, b, c) + ": exact " + w.at(a, b, c).to_string() + " vs closed form " +
                                      format_double(reference(a, b, c)));
                    }
                }
            }
        }
        const bool params_ok = w.alpha == Rational(3, 5) && w.beta == Rational(1, 3) && w.gamma == Rational(1, 2) &&
                               w.at(Sigma, Mixed, Sigma) == Rational(2, 5);
        std::string d = "alpha=" + w.alpha.to_string() + " beta=" + w.beta.to_string() +
                        " gamma=" + w.gamma.to_string() + " W((sigma,M)->sigma)=" + w.at(Sigma, Mixed, Sigma).to_string();
        for (const std::string& b : bad) {
            d += "; mismatch " + b;
        }
        return {params_ok && bad.empty(), d};
    }

    static Outcome purification() {
        const PurificationReport r = verify_purification_equivalence(uniform_ensemble());
        std::string d = std::to_string(r.gates_checked) + " gates, " + std::to_string(r.violations.size()) + " violations";
        if (!r.ok()) {
            d += "; first: " + r.violations.front();
        }
        return {r.ok() && r.gates_checked == 720, d};
    }

    static Outcome deterministic(const Rational& alpha) {
        const ExactW w = compute_w_exact(deterministic_mixture(alpha));
        const TransitionMatrix reference = build_transition_matrix(GateParams{alpha.to_double(), 0.0, 0.0});
        bool table_ok = true;
        for (CState a : kAllCStates) {
            for (CState b : kAllCStates) {
                for (CState c : kAllCStates) {
                    table_ok = table_ok && std::abs(w.at(a, b, c).to_double() - reference(a, b, c)) <= 1e-15;
                }
            }
        }
        const bool ok = table_ok && w.alpha == alpha && w.beta == Rational(0) && w.gamma == Rational(0);
        return {ok, "alpha=" + w.alpha.to_string() + " beta=" + w.beta.to_string() + " gamma=" + w.gamma.to_string() +
                        (table_ok ? ", table matches" : ", table differs from the closed form")};
    }

    Outcome tree(const NoiseParams& n) const {
        constexpr double kSigma = 4.0;
        TreeSimConfig cfg;
        cfg.depth = depth_;
        cfg.noise = n;
        cfg.trials = trials_;
        cfg.seed = common().seed;
        const TreeSimResult sim = simulate_tree(cfg);
        const CStateDist expected = evolve(Protocol::single_step(GateParams::clifford(), n), depth_);
        double worst = 0.0;
        bool ok = true;
        for (CState c : kAllCStates) {
            const double se = sim.standard_error_at(expected[c]);
            const double diff = std::abs(sim.frequency(c) - expected[c]);
            if (se == 0.0) {
                ok = ok && diff < 1e-12;
            } else {
                worst = std::max(worst, diff / se);
            }
        }
        ok = ok && worst <= kSigma;
        std::ostringstream d;
        d << "D=" << depth_ << ", " << trials_ << " trials, max |z| "
          << format_double(std::round(worst * 100) / 100) << " (limit " << kSigma << ")";
        return {ok, d.str()};
    }

    std::size_t sequences_ = 1000;
    std::size_t depth_ = 4;
    std::size_t trials_ = 20000;
    std::string fault_;
    Table table_;
    json exact_ = json::object();
    bool failed_ = false;
};

// --- plumbing --------------------------------------------------------------

std::string config_value(const nlohmann::json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    if (v.is_number() || v.is_boolean()) {
        return v.dump();
    }
    throw std::invalid_argument("config values must be strings, numbers or booleans");
}

// Fills options not given on the command line from the JSON config.
void merge_config(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("config file must hold a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '_', '-');
        CLI::Option* opt = name == "config" ? nullptr : sub.get_option_no_throw("--" + name);
        if (opt == nullptr) {
            throw std::invalid_argument("unknown config key '" + key + "' for " + sub.get_name());
        }
        if (opt->count() == 0) {
            opt->add_result(config_value(value));
            opt->run_callback();
        }
    }
}

std::string svg_path(const std::string& out) {
    const std::size_t slash = out.find_last_of('/');
    const std::size_t dot = out.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        return out.substr(0, dot) + ".svg";
    }
    return out + ".svg";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
        throw IoError("cannot write '" + path + "'");
    }
}

int emit(Command& cmd, const Common& common, std::ostream& out, std::ostream& err) {
    validate_common(common);
    if (common.plot == "svg" && common.out == "-") {
        throw std::invalid_argument("--plot svg needs --out <file>");
    }
    Table t = cmd.execute();
    json meta;
    meta["command"] = cmd.app->get_name();
    meta["version"] = ARBOR_VERSION;
    meta["seed"] = common.seed;
    meta["config"] = cmd.opts.echo();
    for (auto& [k, v] : t.metadata.items()) {
        meta[k] = v;
    }
    t.metadata = std::move(meta);

    std::ostringstream body;
    if ((common.format.empty() ? cmd.default_format() : common.format) == "json") {
        write_json(t, body);
    } else {
        write_csv(t, body);
    }
    if (common.out == "-") {
        out << body.str();
    } else {
        write_file(common.out, body.str());
    }

    const Plot p = cmd.plot();
    if (common.plot != "none" && p.kind != Plot::None) {
        const bool svg = common.plot == "svg";
        std::string text;
        if (p.kind == Plot::Lines) {
            text = svg ? render_svg(t, p.x, p.ys, p.title) : render_ascii(t, p.x, p.ys);
        } else {
            text = svg ? render_map_svg(t, p.x, p.ys[0], p.ys[1], p.title)
                       : render_map_ascii(t, p.x, p.ys[0], p.ys[1]);
        }
        if (svg) {
            write_file(svg_path(common.out), text);
        } else {
            err << text;
        }
    }
    return cmd.status();
}

}  // namespace

std::vector<double> parse_range(const std::string& text, std::size_t grid) {
    auto number = [&](std::string_view s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw std::invalid_argument("bad number '" + std::string(s) + "' in range '" + text + "'");
        }
        return v;
    };
    if (text.empty()) {
        throw std::invalid_argument("empty range");
    }
    std::vector<std::string_view> parts;
    const std::string_view all(text);
    const char sep = all.find(',') != std::string_view::npos ? ',' : ':';
    for (std::size_t start = 0;;) {
        const std::size_t end = all.find(sep, start);
        parts.push_back(all.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) {
            break;
        }
        start = end + 1;
    }
    if (sep == ',') {
        std::vector<double> out;
        for (std::string_view p : parts) {
            out.push_back(number(p));
        }
        return out;
    }
    if (parts.size() == 1) {
        return {number(parts[0])};
    }
    if (parts.size() > 3) {
        throw std::invalid_argument("range '" + text + "' has too many fields");
    }
    std::size_t count = grid;
    if (parts.size() == 3) {
        const double n = number(parts[2]);
        if (n < 1 || n != std::floor(n) || n > 1e7) {
            throw std::invalid_argument("point count in '" + text + "' must be a positive integer");
        }
        count = static_cast<std::size_t>(n);
    }
    if (count < 1) {
        throw std::invalid_argument("range '" + text + "' has no points");
    }
    return linspace(number(parts[0]), number(parts[1]), count);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fixed points, thresholds and oracle checks for noisy tree circuits", "arbor"};
    app.set_version_flag("--version", ARBOR_VERSION);
    app.require_subcommand(1);
    Common common;
    std::vector<std::unique_ptr<Command>> commands;
    commands.push_back(std::make_unique<MiptCommand>(app, common));
    commands.push_back(std::make_unique<NoisyCommand>(app, common));
    commands.push_back(std::make_unique<PhaseDiagramCommand>(app, common));
    commands.push_back(std::make_unique<BoundaryCommand>(app, common));
    commands.push_back(std::make_unique<MultistepCommand>(app, common));
    commands.push_back(std::make_unique<IsingCommand>(app, common));
    commands.push_back(std::make_unique<VerifyCommand>(app, common));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        err << "arbor: " << e.what() << "\n";
        return kValidationError;
    }

    Command* cmd = nullptr;
    for (auto& c : commands) {
        if (c->app->parsed()) {
            cmd = c.get();
        }
    }
    try {
        if (!common.config.empty()) {
            merge_config(*cmd->app, common.config);
        }
        return emit(*cmd, common, out, err);
    } catch (const CLI::Error& e) {
        err << "arbor: " << e.what() << "\n";
        return kValidationError;
    } catch (const ComputationError& e) {
        err << "arbor: computation failed: " << e.what() << "\n";
        return kComputationError;
    } catch (const ResourceLimitError& e) {
        err << "arbor: " << e.what() << "\n";
        return kComputationError;
    } catch (const std::invalid_argument& e) {
        err << "arbor: " << e.what() << "\n";
        return kValidationError;
    } catch (const std::domain_error& e) {
        err << "arbor: " << e.what() << "\n";
        return kValidationError;
    } catch (const std::out_of_range& e) {
        err << "arbor: " << e.what() << "\n";
        return kValidationError;
    } catch (const IoError& e) {
        err << "arbor: " << e.what() << "\n";
        return kValidationError;
    } catch (const std::exception& e) {
        err << "arbor: " << e.what() << "\n";
        return kComputationError;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"arbor"};
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace arbor::cli
