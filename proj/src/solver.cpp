#include "aoivoi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aoivoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ThetaEval {
    double p = 0.0;        // auxiliary objective at theta
    double duration = 1.0; // E[T] at theta's policy (1 when degenerate)
    bool degenerate = false;
};

ThetaEval eval_theta(const SystemSpec& spec, const MomentSet& moments, double theta) {
    ThetaEval ev;
    const ThresholdPolicy policy = make_policy(spec, theta);
    if (!policy.all_finite()) {
        // Waiting forever: -theta E[T] diverges below, so the point lies on
        // the negative side of the root.
        ev.p = -kInf;
        ev.degenerate = true;
        return ev;
    }
    const double beta = spec.beta();
    ev.duration = expected_epoch(spec, policy, moments);
    ev.p = (1.0 - beta) * expected_age(spec, policy, moments) -
           beta * expected_value(spec, policy, moments) - theta * ev.duration;
    return ev;
}

bool converged(const ThetaEval& ev, double tol) {
    return !ev.degenerate && std::abs(ev.p) <= tol * ev.duration;
}

} // namespace

PolicySolution solve(const SystemSpec& spec, const SolveOptions& options) {
    if (!(options.tolerance > 0.0))
        throw SpecError("solver tolerance must be > 0");
    if (options.max_iterations < 1)
        throw SpecError("solver iteration budget must be >= 1");

    const MomentSet moments = mixture_moments(spec);
    const double beta = spec.beta();

    // The objective (1-beta) AoI - beta VoI is bounded below by -max value,
    // so any theta below that bound sits strictly left of the root.
    double max_value = 0.0;
    for (const ClassSpec& c : spec.classes())
        max_value = std::max(max_value, c.initial_value);
    double lo = -max_value - 1.0;
    ThetaEval lo_ev = eval_theta(spec, moments, lo);
    for (int i = 0; i < 200 && !(lo_ev.p > 0.0); ++i) {
        lo = 2.0 * lo - 1.0;
        lo_ev = eval_theta(spec, moments, lo);
    }
    if (!(lo_ev.p > 0.0))
        throw NoBracketError("no theta with positive auxiliary objective found");

    int iterations = 0;

    // The zero-wait objective is achievable, so the root lies at or below it.
    const double zero_wait_age =
        moments.mean_service * moments.mean_delay + 0.5 * moments.second_delay;
    double hi = std::max(1.0, (1.0 - beta) * zero_wait_age);
    ThetaEval hi_ev = eval_theta(spec, moments, hi);
    bool bracketed = false;
    for (int i = 0; i < 200; ++i) {
        if (converged(hi_ev, options.tolerance))
            break;
        if (hi_ev.p < 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        lo_ev = hi_ev;
        hi *= 2.0;
        hi_ev = eval_theta(spec, moments, hi);
    }

    double best = hi;
    ThetaEval best_ev = hi_ev;
    if (!converged(best_ev, options.tolerance)) {
        if (!bracketed)
            throw NoBracketError("bracket expansion exhausted without a sign change");
        // Bisect. Stop on the residual criterion; the width floor only guards
        // against stalling at the resolution of double.
        bool ok = false;
        for (; iterations < options.max_iterations; ++iterations) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi)
                break; // interval no longer representable
            const ThetaEval mid_ev = eval_theta(spec, moments, mid);
            if (!mid_ev.degenerate &&
                (best_ev.degenerate || std::abs(mid_ev.p) < std::abs(best_ev.p))) {
                best = mid;
                best_ev = mid_ev;
            }
            if (converged(mid_ev, options.tolerance)) {
                ok = true;
                break;
            }
            if (mid_ev.p > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        if (!ok && !converged(best_ev, options.tolerance))
            throw NotConvergedError("bisection did not reach tolerance in " +
                                    std::to_string(options.max_iterations) + " iterations");
    }

    PolicySolution solution;
    solution.theta = best;
    solution.policy = make_policy(spec, best);
    solution.residual = std::abs(best_ev.p);
    solution.iterations = iterations;
    const Metrics m = metrics(spec, solution.policy);
    solution.aoi = m.aoi;
    solution.voi = m.voi;
    solution.objective = (1.0 - beta) * m.aoi - beta * m.voi;
    if (std::abs(solution.objective - solution.theta) >
        1e-8 * std::max(1.0, std::abs(solution.theta)))
        throw SolverError("objective/root consistency check failed");
    return solution;
}

std::vector<FrontierPoint> frontier(const SystemSpec& spec, std::span<const double> betas,
                                    const SolveOptions& options) {
    if (betas.empty())
        throw SpecError("beta grid must not be empty");
    for (std::size_t k = 0; k < betas.size(); ++k) {
        if (!(betas[k] >= 0.0 && betas[k] <= 1.0))
            throw SpecError("beta grid values must lie in [0,1]");
        if (k > 0 && !(betas[k] >= betas[k - 1]))
            throw SpecError("beta grid must be sorted ascending");
    }

    std::vector<FrontierPoint> points;
    points.reserve(betas.size());
    for (double beta : betas) {
        const SystemSpec weighted = spec.with_beta(beta);
        const PolicySolution sol = solve(weighted, options);
        FrontierPoint pt;
        pt.beta = beta;
        pt.theta = sol.theta;
        pt.aoi = sol.aoi;
        pt.voi = sol.voi;
        pt.min_interupdate = sol.policy.min_interupdate;
        points.push_back(std::move(pt));
    }

    // Larger beta trades age for value, never both ways; a violation beyond
    // rounding noise means a solver defect.
    for (std::size_t k = 1; k < points.size(); ++k) {
        const double aoi_slack = 1e-9 * std::max(1.0, std::abs(points[k].aoi));
        const double voi_slack = 1e-9 * std::max(1.0, std::abs(points[k].voi));
        if (points[k].aoi < points[k - 1].aoi - aoi_slack ||
            points[k].voi < points[k - 1].voi - voi_slack)
            throw std::logic_error("frontier monotonicity violated (solver defect)");
    }
    return points;
}

std::vector<double> linear_grid(double start, double stop, std::size_t count) {
    if (count == 0)
        throw SpecError("grid count must be >= 1");
    std::vector<double> grid;
    grid.reserve(count);
    if (count == 1) {
        grid.push_back(start);
        return grid;
    }
    for (std::size_t k = 0; k < count; ++k)
        grid.push_back(start + (stop - start) * static_cast<double>(k) /
                                   static_cast<double>(count - 1));
    return grid;
}

} // namespace aoivoi
