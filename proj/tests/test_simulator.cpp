#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "aoivoi/simulator.hpp"
#include "aoivoi/solver.hpp"
#include "oracles.hpp"

using namespace aoivoi;

namespace {

SystemSpec single_exponential(double mu, double lambda, double beta, double nu, double alpha) {
    return SystemSpec({{1.0, nu, alpha, ServiceDistribution::exponential(mu)}}, lambda, beta);
}

} // namespace

TEST_CASE("zero value gives exactly zero VoI") {
    const SystemSpec spec(
        {{0.5, 0.0, 0.5, ServiceDistribution::exponential(1.0)},
         {0.5, 0.0, 0.0, ServiceDistribution::exponential(2.0)}},
        2.0, 0.0);
    const SimResult sim = simulate(spec, zero_wait_policy(spec), 10'000, 5);
    CHECK(sim.voi == 0.0);
    CHECK(sim.mean_value_area == 0.0);
}

TEST_CASE("single-class zero-wait AoI matches the closed form") {
    const SystemSpec spec = single_exponential(1.0, 1.0, 0.0, 1.0, 1.0);
    const SimResult sim = simulate(spec, zero_wait_policy(spec), 1'000'000, 42);
    CHECK(std::abs(sim.aoi - 2.5) <= 3.0 * sim.aoi_se);
    CHECK(sim.aoi_se < 0.01);
}

TEST_CASE("degenerate deterministic epochs") {
    const double c = 2.0;
    const SystemSpec spec(
        {{1.0, 1.0, 0.0, ServiceDistribution::deterministic(c)}}, kGenerateAtWill, 0.0);
    const SimResult sim = simulate(spec, zero_wait_policy(spec), 1000, 9);
    // Every epoch is exactly T = c, A = c^2 + c^2/2.
    CHECK(sim.mean_duration == c);
    CHECK(sim.duration_se == 0.0);
    CHECK(sim.aoi == doctest::Approx(1.5 * c).epsilon(1e-15));
}

TEST_CASE("identical inputs give bit-identical results") {
    const SystemSpec spec = oracles::valuable_slow(10.0, 0.3);
    const ThresholdPolicy policy = make_policy_from_thresholds(spec, {3.0, 1.0});
    const SimResult a = simulate(spec, policy, 50'000, 1234);
    const SimResult b = simulate(spec, policy, 50'000, 1234);
    CHECK(a.aoi == b.aoi);
    CHECK(a.voi == b.voi);
    CHECK(a.aoi_se == b.aoi_se);
    CHECK(a.mean_age_area == b.mean_age_area);
    CHECK(a.admitted == b.admitted);
    const SimResult c = simulate(spec, policy, 50'000, 1235);
    CHECK(a.aoi != c.aoi);
}

TEST_CASE("epoch records are self-consistent") {
    const SystemSpec spec = oracles::valuable_slow(10.0, 0.3);
    const ThresholdPolicy policy = make_policy_from_thresholds(spec, {3.0, 1.0});
    std::vector<EpochRecord> trace;
    const SimResult sim = simulate(spec, policy, 2000, 77, &trace);
    REQUIRE(trace.size() == 2000);

    SUBCASE("duration decomposition and area formulas") {
        for (const EpochRecord& e : trace) {
            CHECK(e.duration ==
                  doctest::Approx(e.controlled_wait + e.exogenous_wait + e.next_service)
                      .epsilon(1e-15));
            CHECK(e.age_area ==
                  doctest::Approx(e.prior_service * e.duration + 0.5 * e.duration * e.duration)
                      .epsilon(1e-15));
            CHECK(e.age_area >= 0.0);
            CHECK(e.value_area >= 0.0);
        }
    }

    SUBCASE("trapezoid integration of the age sawtooth matches the ratio estimator") {
        // Age rises linearly from prior_service to prior_service + duration
        // over each epoch; the trapezoid rule is exact for a linear path.
        double area = 0.0;
        double time = 0.0;
        for (const EpochRecord& e : trace) {
            const double start = e.prior_service;
            const double end = e.prior_service + e.duration;
            area += 0.5 * (start + end) * e.duration;
            time += e.duration;
        }
        CHECK(area / time == doctest::Approx(sim.aoi).epsilon(1e-9));
    }

    SUBCASE("quadrature of the value curve matches the closed-form areas") {
        for (std::size_t k = 0; k < 200; ++k) {
            const EpochRecord& e = trace[k];
            const ClassSpec& c = spec.cls(e.prior_class);
            const double direct = oracles::integrate(
                [&](double t) {
                    return c.initial_value *
                           std::exp(-c.decay_rate * (t + e.prior_service));
                },
                0.0, e.duration, 1e-12);
            CHECK(e.value_area == doctest::Approx(direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("standard errors shrink like one over root n") {
    const SystemSpec spec = oracles::valuable_slow(10.0, 0.3);
    const ThresholdPolicy policy = make_policy_from_thresholds(spec, {2.0, 0.5});

    const auto spread = [&](std::uint64_t epochs, std::uint64_t seed0, double& se_avg) {
        const int reps = 24;
        std::vector<double> estimates;
        double se_sum = 0.0;
        for (int r = 0; r < reps; ++r) {
            const SimResult sim = simulate(spec, policy, epochs, seed0 + r);
            estimates.push_back(sim.aoi);
            se_sum += sim.aoi_se;
        }
        se_avg = se_sum / reps;
        const double mean =
            std::accumulate(estimates.begin(), estimates.end(), 0.0) / reps;
        double var = 0.0;
        for (double e : estimates)
            var += (e - mean) * (e - mean);
        return std::sqrt(var / (reps - 1));
    };

    double se_small = 0.0, se_big = 0.0;
    const double spread_small = spread(4000, 100, se_small);
    const double spread_big = spread(16000, 200, se_big);

    // Quadrupling the epochs should halve both the reported standard error
    // and the cross-seed spread; allow generous slack for 24 replicates.
    CHECK(se_big == doctest::Approx(0.5 * se_small).epsilon(0.2));
    CHECK(spread_big == doctest::Approx(0.5 * spread_small).epsilon(0.6));
    // The reported standard error must describe the actual spread.
    CHECK(spread_small == doctest::Approx(se_small).epsilon(0.6));
}

TEST_CASE("explicit arrival simulation agrees with the epoch recursion") {
    oracles::SpecSampler sampler(113);
    for (int rep = 0; rep < 3; ++rep) {
        const SystemSpec spec =
            sampler.sample(sampler.uniform(0.0, 0.9), sampler.uniform(0.5, 5.0));
        const PolicySolution sol = solve(spec);
        const SimResult fast = simulate(spec, sol.policy, 100'000, 500 + rep);
        const SimResult slow = simulate_explicit(spec, sol.policy, 100'000, 900 + rep);
        const double aoi_se = std::hypot(fast.aoi_se, slow.aoi_se);
        const double voi_se = std::hypot(fast.voi_se, slow.voi_se);
        CHECK(std::abs(fast.aoi - slow.aoi) <= 3.0 * aoi_se);
        if (voi_se > 0.0)
            CHECK(std::abs(fast.voi - slow.voi) <= 3.0 * voi_se);
    }
}

TEST_CASE("explicit mode discards arrivals under finite rates") {
    const SystemSpec spec = oracles::valuable_slow(10.0, 0.3);
    const ThresholdPolicy policy = make_policy_from_thresholds(spec, {2.0, 1.0});
    const SimResult sim = simulate_explicit(spec, policy, 10'000, 3);
    CHECK(sim.discarded > 0);

    const SystemSpec gaw = oracles::valuable_slow(kGenerateAtWill, 0.3);
    const SimResult gaw_sim = simulate_explicit(gaw, policy, 10'000, 3);
    CHECK(gaw_sim.discarded == 0);
}

TEST_CASE("validation report") {
    SUBCASE("single-class systems pass under both variants") {
        for (PhiVariant variant : {PhiVariant::mixture, PhiVariant::per_class}) {
            const SystemSpec spec =
                single_exponential(1.0, 1.0, 0.4, 5.0, 0.8).with_phi_variant(variant);
            const PolicySolution sol = solve(spec);
            const ValidationReport report = validate(spec, sol.policy, 200'000, 11);
            CHECK(report.all_pass);
            REQUIRE(report.rows.size() >= 6);
        }
    }
    SUBCASE("epoch duration does not depend on the variant at zero wait") {
        const SystemSpec a = oracles::valuable_slow(10.0, 0.5, PhiVariant::mixture);
        const SystemSpec b = oracles::valuable_slow(10.0, 0.5, PhiVariant::per_class);
        const double ta = epoch_expectations(a, zero_wait_policy(a)).duration;
        const double tb = epoch_expectations(b, zero_wait_policy(b)).duration;
        CHECK(ta == tb);
    }
}

TEST_CASE("simulator input validation") {
    const SystemSpec spec = oracles::valuable_slow(10.0, 0.3);
    const ThresholdPolicy policy = zero_wait_policy(spec);
    CHECK_THROWS_AS(simulate(spec, policy, 0, 1), SpecError);

    ThresholdPolicy broken = policy;
    broken.min_interupdate[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(simulate(spec, broken, 100, 1), DomainError);

    ThresholdPolicy wrong_size = policy;
    wrong_size.min_interupdate.pop_back();
    CHECK_THROWS_AS(simulate(spec, wrong_size, 100, 1), SpecError);
}
