#include <cmath>
#include <random>
#include <stdexcept>

#include "arbor/threshold.h"
#include "doctest.h"

using namespace arbor;

TEST_SUITE("threshold") {
    TEST_CASE("phase classification") {
        CHECK(classify_dist(CStateDist(1e-8, 0.0, 1.0 - 1e-8, 0.0)) == Phase::Quantum);
        CHECK(classify_dist(CStateDist(0.0, 0.3, 0.0, 0.7)) == Phase::Classical);
        CHECK(classify_dist(CStateDist(0.0, 0.0, 0.5, 0.5)) == Phase::Noisy);
        CHECK(classify_dist(CStateDist(1e-10, 0.0, 0.0, 1.0 - 1e-10)) == Phase::Noisy);
        FixedPointResult fp;
        fp.converged = false;
        CHECK_THROWS_AS(classify_phase(fp), ComputationError);
        CHECK(in_region(Phase::Classical, PhaseRegion::ClassicalOrBetter));
        CHECK_FALSE(in_region(Phase::Classical, PhaseRegion::Quantum));
    }

    TEST_CASE("linspace") {
        const auto v = linspace(0.0, 1.0, 5);
        REQUIRE(v.size() == 5);
        CHECK(v.front() == 0.0);
        CHECK(v[2] == 0.5);
        CHECK(v.back() == 1.0);
        CHECK(linspace(0.3, 0.9, 1) == std::vector<double>{0.3});
    }

    TEST_CASE("measurement threshold of the Clifford tree is continuous at 1/6") {
        ThresholdOptions opts;
        opts.tol = 1e-5;
        const ThresholdResult t = find_threshold(single_step_family(GateParams::clifford(), {}, Axis::P),
                                                 Axis::P, 0.0, 0.3, PhaseRegion::Quantum, opts);
        CHECK(std::abs(t.value - 1.0 / 6.0) < 1e-5);
        CHECK(t.region_below);
        CHECK(t.order == TransitionOrder::Continuous);
    }

    TEST_CASE("measurement threshold follows 1 - 1/(2 alpha)") {
        ThresholdOptions opts;
        opts.tol = 1e-5;
        for (double a : {0.7, 0.9}) {
            const GateParams g{a, 1.0 / 3.0, 0.5};
            const ThresholdResult t =
                find_threshold(single_step_family(g, {}, Axis::P), Axis::P, 0.0, 0.6, PhaseRegion::Quantum, opts);
            CHECK(std::abs(t.value - (1.0 - 1.0 / (2.0 * a))) < 1e-5);
        }
    }

    TEST_CASE("decoherence threshold is first order near 0.0229") {
        ThresholdOptions opts;
        opts.tol = 1e-6;
        const ProtocolFamily fam = single_step_family(GateParams::clifford(), {}, Axis::R);
        const ThresholdResult q = find_threshold(fam, Axis::R, 0.0, 0.05, PhaseRegion::Quantum, opts);
        const ThresholdResult c = find_threshold(fam, Axis::R, 0.0, 0.05, PhaseRegion::ClassicalOrBetter, opts);
        CHECK(q.value == doctest::Approx(0.022858).epsilon(1e-4));
        CHECK(std::abs(q.value - c.value) < 2e-6);
        CHECK(q.order == TransitionOrder::FirstOrder);
        CHECK(q.jump > 0.5);
        CHECK(q.unconverged_probes == 0);
    }

    TEST_CASE("bracket that does not straddle throws") {
        const ProtocolFamily fam = single_step_family(GateParams::clifford(), {}, Axis::P);
        CHECK_THROWS_AS(find_threshold(fam, Axis::P, 0.2, 0.3, PhaseRegion::Quantum), std::invalid_argument);
        CHECK_THROWS_AS(find_threshold(fam, Axis::P, 0.0, 0.3, PhaseRegion::Quantum, {.tol = 0.0}),
                        std::invalid_argument);
    }

    TEST_CASE("corners of the noise plane") {
        const PhaseDiagram d = sweep_grid({0.0, 0.5}, {0.0, 0.5}, noise_plane(GateParams::clifford()));
        REQUIRE(d.points.size() == 4);
        CHECK(d.at(0, 0).phase == Phase::Quantum);
        CHECK(d.at(1, 0).phase == Phase::Noisy);
        CHECK(d.at(0, 1).phase == Phase::Noisy);
        CHECK(d.at(1, 1).phase == Phase::Noisy);
    }

    TEST_CASE("sweeps do not depend on the thread count") {
        const auto xs = linspace(0.0, 0.3, 7);
        const auto ys = linspace(0.0, 0.04, 5);
        SweepOptions one;
        one.threads = 1;
        SweepOptions many;
        many.threads = 4;
        const PhaseDiagram a = sweep_grid(xs, ys, noise_plane(GateParams::clifford()), one);
        const PhaseDiagram b = sweep_grid(xs, ys, noise_plane(GateParams::clifford()), many);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].fp.dist == b.points[i].fp.dist);
            CHECK(a.points[i].phase == b.points[i].phase);
        }
    }

    TEST_CASE("phase regions are monotone in measurement and decoherence") {
        const auto xs = linspace(0.0, 0.3, 13);
        const auto ys = linspace(0.0, 0.05, 11);
        const PhaseDiagram d = sweep_grid(xs, ys, noise_plane(GateParams::clifford()));
        auto rank = [](const PhasePoint& pt) {
            REQUIRE(pt.phase.has_value());
            return *pt.phase == Phase::Quantum ? 2 : *pt.phase == Phase::Classical ? 1 : 0;
        };
        for (std::size_t iy = 0; iy < ys.size(); ++iy) {
            for (std::size_t ix = 0; ix + 1 < xs.size(); ++ix) {
                CHECK(rank(d.at(ix, iy)) >= rank(d.at(ix + 1, iy)));
            }
        }
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            for (std::size_t iy = 0; iy + 1 < ys.size(); ++iy) {
                CHECK(rank(d.at(ix, iy)) >= rank(d.at(ix, iy + 1)));
            }
        }
    }

    TEST_CASE("boundary noise alone has a sharp threshold at one half") {
        const auto rows = boundary_noise_scan(linspace(0.0, 1.0, 11), GateParams::clifford(), {});
        for (const BoundaryRow& row : rows) {
            REQUIRE(row.phase.has_value());
            CHECK((*row.phase == Phase::Quantum) == (row.r_leaves < 0.5));
        }
        const ThresholdResult t =
            find_threshold(single_step_family(GateParams::clifford(), {}, Axis::RLeaves, 0.0), Axis::RLeaves, 0.0,
                           0.9, PhaseRegion::Quantum, {.tol = 1e-6});
        CHECK(std::abs(t.value - 0.5) < 1e-6);
    }

    TEST_CASE("first order at every positive decoherence rate") {
        for (double r : {0.005, 0.01, 0.02}) {
            const ThresholdResult t =
                find_threshold(single_step_family(GateParams::clifford(), {0.0, r}, Axis::P), Axis::P, 0.0, 0.3,
                               PhaseRegion::Quantum, {.tol = 1e-6});
            CHECK(t.order == TransitionOrder::FirstOrder);
        }
    }

    TEST_CASE("finer bisection nests inside the coarse bracket") {
        const ProtocolFamily fam = single_step_family(GateParams::clifford(), {}, Axis::R);
        const ThresholdResult coarse = find_threshold(fam, Axis::R, 0.0, 0.05, PhaseRegion::Quantum, {.tol = 1e-5});
        const ThresholdResult fine = find_threshold(fam, Axis::R, 0.0, 0.05, PhaseRegion::Quantum, {.tol = 1e-6});
        CHECK(fine.lo >= coarse.lo);
        CHECK(fine.hi <= coarse.hi);
        CHECK(classify_dist(iterate(fam(coarse.lo)).dist) != classify_dist(iterate(fam(coarse.hi)).dist));
    }

    TEST_CASE("equal alternating gates reduce to the single-step protocol") {
        MultistepParams m;
        m.alpha_even = m.alpha_odd = 0.6;
        m.beta = 1.0 / 3.0;
        m.gamma = 0.5;
        m.r = 0.01;
        const FixedPointResult two = iterate(m.protocol());
        const FixedPointResult one = iterate(Protocol::single_step(GateParams::clifford(), {0.0, 0.01}));
        CHECK(two.dist.max_abs_diff(one.dist) < 1e-12);
    }

    TEST_CASE("multistep schedule alternates gates starting on the leaves") {
        MultistepParams m;
        m.r = 0.005;
        const auto s = m.schedule();
        REQUIRE(s.size() == 2);
        CHECK(s[0].gate.alpha == 0.8);
        CHECK(s[1].gate.alpha == 0.2);
        CHECK(s[0].noise.r == 0.005);
        const auto rows = multistep_scan(m, Axis::RLeaves, {0.0, 1.0});
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].phase.has_value());
        CHECK(rows[1].phase == Phase::Noisy);
    }

    TEST_CASE("at alpha one half P2 - k PM is conserved") {
        // k = (1 - beta) / (1 - gamma). Without bulk noise there is no sigma,
        // and P2, PM shrink by factors that balance exactly at this alpha.
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            const GateParams g{0.5, u(rng), 0.9 * u(rng)};
            const double k = (1.0 - g.beta) / (1.0 - g.gamma);
            const double r = u(rng);
            CStateDist d(1.0 - r, 0.0, 0.0, r);
            const double before = d[CState::Two] - k * d[CState::Mixed];
            for (int step = 0; step < 5; ++step) {
                d = recursion_step(d, g, {});
            }
            CHECK(d[CState::Two] - k * d[CState::Mixed] == doctest::Approx(before).epsilon(1e-12));
        }
    }

    TEST_CASE("self-dual boundary threshold sits at 1 / (1 + k)") {
        const GateParams clifford_half{0.5, 1.0 / 3.0, 0.5};
        const GateParams balanced{0.5, 0.4, 0.4};
        for (const auto& [g, expected] : {std::pair{clifford_half, 3.0 / 7.0}, std::pair{balanced, 0.5}}) {
            const ThresholdResult t = find_threshold(single_step_family(g, {}, Axis::RLeaves, 0.0), Axis::RLeaves,
                                                     0.0, 0.9, PhaseRegion::Quantum, {.tol = 1e-6});
            CHECK(std::abs(t.value - expected) < 1e-6);
        }
        const auto rows = boundary_noise_scan({0.2, 0.99}, clifford_half, {});
        CHECK(rows[0].fp.dist[CState::Two] == doctest::Approx(1.0 - 7.0 * 0.2 / 3.0).epsilon(1e-6));
        CHECK(rows[1].fp.dist[CState::One] > 0.0);
    }
}
