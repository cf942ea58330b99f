#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aoivoi/solver.hpp"
#include "oracles.hpp"

using namespace aoivoi;

namespace {

SystemSpec anchor_spec() {
    return SystemSpec({{1.0, 1.0, 1.0, ServiceDistribution::exponential(1.0)}}, 1.0, 0.0);
}

} // namespace

TEST_CASE("hand-proven anchor bracket") {
    const SystemSpec spec = anchor_spec();
    CHECK(dinkelbach_objective(spec, 2.0) == 1.0);
    CHECK(metrics(spec, zero_wait_policy(spec)).aoi == 2.5);

    const PolicySolution sol = solve(spec);
    CHECK(sol.theta > 2.0);
    CHECK(sol.theta <= 2.5);
    CHECK(sol.aoi == doctest::Approx(sol.theta).epsilon(1e-10)); // beta = 0
}

TEST_CASE("solution invariants on random specs") {
    oracles::SpecSampler sampler(101);
    for (int rep = 0; rep < 25; ++rep) {
        const double lambda = rep % 3 == 0 ? kGenerateAtWill : sampler.uniform(0.3, 10.0);
        const SystemSpec spec = sampler.sample(sampler.uniform(0.0, 0.99), lambda);
        const PolicySolution sol = solve(spec);

        const MomentSet m = mixture_moments(spec);
        const double duration = expected_epoch(spec, sol.policy, m);
        CHECK(sol.residual <= 1e-10 * duration);
        CHECK(std::abs(sol.objective - sol.theta) <= 1e-8 * std::max(1.0, std::abs(sol.theta)));
        for (double y : sol.policy.min_interupdate)
            CHECK(y >= 0.0);
    }
}

TEST_CASE("beta = 0 yields one shared threshold") {
    oracles::SpecSampler sampler(103);
    for (int rep = 0; rep < 20; ++rep) {
        const SystemSpec spec = sampler.sample(0.0, sampler.uniform(0.5, 5.0));
        const PolicySolution sol = solve(spec);
        for (double y : sol.policy.min_interupdate)
            CHECK(y == sol.policy.min_interupdate.front());
    }
}

TEST_CASE("solving twice is bit-identical") {
    const SystemSpec spec = oracles::valuable_slow(10.0, 0.7);
    const PolicySolution a = solve(spec);
    const PolicySolution b = solve(spec);
    CHECK(a.theta == b.theta);
    CHECK(a.aoi == b.aoi);
    CHECK(a.voi == b.voi);
    CHECK(a.policy.min_interupdate == b.policy.min_interupdate);
}

TEST_CASE("auxiliary objective changes sign exactly once") {
    oracles::SpecSampler sampler(107);
    for (int rep = 0; rep < 10; ++rep) {
        const SystemSpec spec =
            sampler.sample(sampler.uniform(0.0, 0.99), sampler.uniform(0.5, 5.0));
        const PolicySolution sol = solve(spec);
        const double lo = sol.theta - std::max(5.0, 0.5 * std::abs(sol.theta));
        const double hi = sol.theta + std::max(5.0, 0.5 * std::abs(sol.theta));
        int sign_changes = 0;
        double prev = dinkelbach_objective(spec, lo);
        for (int k = 1; k < 100; ++k) {
            const double theta = lo + (hi - lo) * k / 99.0;
            const double p = dinkelbach_objective(spec, theta);
            if ((prev > 0.0) != (p > 0.0))
                ++sign_changes;
            prev = p;
        }
        CHECK(sign_changes == 1);
    }
}

TEST_CASE("pure value weighting solves too") {
    const SystemSpec spec(
        {{0.6, 10.0, 0.5, ServiceDistribution::exponential(1.0)},
         {0.4, 2.0, 1.5, ServiceDistribution::exponential(2.0)}},
        3.0, 1.0);
    const PolicySolution sol = solve(spec);
    CHECK(sol.theta < 0.0); // maximizing value makes the objective -VoI
    CHECK(sol.voi == doctest::Approx(-sol.theta).epsilon(1e-8));
}

TEST_CASE("exchange argument across weights") {
    oracles::SpecSampler sampler(109);
    for (int rep = 0; rep < 15; ++rep) {
        const SystemSpec base = sampler.sample(0.0, sampler.uniform(0.5, 8.0));
        const double b1 = sampler.uniform(0.0, 0.5);
        const double b2 = sampler.uniform(b1 + 0.01, 0.99);
        const PolicySolution s1 = solve(base.with_beta(b1));
        const PolicySolution s2 = solve(base.with_beta(b2));
        // The policy tuned for b2, priced at weight b1, can never beat the
        // b1 optimum.
        const double cross = (1.0 - b1) * s2.aoi - b1 * s2.voi;
        CHECK(cross >= s1.theta - 1e-8 * std::max(1.0, std::abs(s1.theta)));
    }
}

TEST_CASE("frontier basics") {
    const SystemSpec spec = oracles::valuable_slow(10.0, 0.0);

    SUBCASE("single point grid") {
        const std::vector<double> grid{0.0};
        const auto points = frontier(spec, grid);
        REQUIRE(points.size() == 1);
        CHECK(points[0].beta == 0.0);
        const PolicySolution sol = solve(spec.with_beta(0.0));
        CHECK(points[0].theta == sol.theta);
    }
    SUBCASE("rejects bad grids") {
        CHECK_THROWS_AS(frontier(spec, std::vector<double>{}), SpecError);
        CHECK_THROWS_AS(frontier(spec, std::vector<double>{0.5, 0.2}), SpecError);
        CHECK_THROWS_AS(frontier(spec, std::vector<double>{-0.1, 0.5}), SpecError);
        // beta = 1 in a grid needs positive decay rates everywhere; this
        // system has them, so it is allowed.
        CHECK_NOTHROW(frontier(spec, std::vector<double>{0.9, 1.0}));
    }
    SUBCASE("AoI and VoI are nondecreasing in beta") {
        const auto grid = linear_grid(0.0, 0.999, 21);
        const auto points = frontier(spec, grid);
        for (std::size_t k = 1; k < points.size(); ++k) {
            CHECK(points[k].aoi >= points[k - 1].aoi - 1e-9 * std::max(1.0, points[k].aoi));
            CHECK(points[k].voi >= points[k - 1].voi - 1e-9 * std::max(1.0, points[k].voi));
        }
    }
}

TEST_CASE("faster arrivals improve the tradeoff") {
    const auto grid = linear_grid(0.0, 0.999, 11);
    for (bool slow_valuable : {true, false}) {
        const SystemSpec fast = slow_valuable ? oracles::valuable_slow(1000.0, 0.0)
                                              : oracles::valuable_fast(1000.0, 0.0);
        const SystemSpec slow = slow_valuable ? oracles::valuable_slow(1.0, 0.0)
                                              : oracles::valuable_fast(1.0, 0.0);
        const auto f = frontier(fast, grid);
        const auto s = frontier(slow, grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            CHECK(f[k].theta <= s[k].theta + 1e-9 * std::max(1.0, std::abs(s[k].theta)));
    }
}

TEST_CASE("generate-at-will limit") {
    for (bool slow_valuable : {true, false}) {
        for (double beta : {0.0, 0.3, 0.7, 0.95}) {
            const SystemSpec big = slow_valuable ? oracles::valuable_slow(1e6, beta)
                                                 : oracles::valuable_fast(1e6, beta);
            const SystemSpec inf = slow_valuable
                                       ? oracles::valuable_slow(kGenerateAtWill, beta)
                                       : oracles::valuable_fast(kGenerateAtWill, beta);
            const double t1 = solve(big).theta;
            const double t2 = solve(inf).theta;
            CHECK(std::abs(t1 - t2) <= 1e-3 * std::max(std::abs(t1), std::abs(t2)));
        }
    }
}

TEST_CASE("solver option validation") {
    const SystemSpec spec = anchor_spec();
    SolveOptions opts;
    opts.tolerance = 0.0;
    CHECK_THROWS_AS(solve(spec, opts), SpecError);
    opts.tolerance = 1e-10;
    opts.max_iterations = 0;
    CHECK_THROWS_AS(solve(spec, opts), SpecError);
    opts.max_iterations = 3; // far too few to converge
    CHECK_THROWS_AS(solve(spec, opts), NotConvergedError);
}
