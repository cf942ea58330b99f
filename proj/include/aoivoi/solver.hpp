#pragma once

#include <span>
#include <vector>

#include "aoivoi/analytic.hpp"
#include "aoivoi/model.hpp"
#include "aoivoi/policy.hpp"

namespace aoivoi {

struct SolveOptions {
    // Convergence: |p(theta)| <= tolerance * E[T] at theta.
    double tolerance = 1e-10;
    int max_iterations = 200;
};

struct PolicySolution {
    double theta = 0.0; // optimal combined objective
    ThresholdPolicy policy;
    double aoi = 0.0;
    double voi = 0.0;
    double objective = 0.0; // (1-beta) aoi - beta voi, equals theta up to residual
    double residual = 0.0;  // |p(theta)|
    int iterations = 0;
};

struct FrontierPoint {
    double beta = 0.0;
    double theta = 0.0;
    double aoi = 0.0;
    double voi = 0.0;
    std::vector<double> min_interupdate;
};

// Root of the auxiliary objective by bracketed bisection. Throws
// NoBracketError if expansion cannot straddle the root and NotConvergedError
// if the iteration budget runs out first.
PolicySolution solve(const SystemSpec& spec, const SolveOptions& options = {});

// One solve per weight in an ascending grid over [0,1]; a weight of exactly 1
// requires every class to have a positive decay rate. The achieved AoI and
// VoI are checked to be nondecreasing along the grid.
std::vector<FrontierPoint> frontier(const SystemSpec& spec, std::span<const double> betas,
                                    const SolveOptions& options = {});

// Evenly spaced grid, the default sweep for tradeoff curves.
std::vector<double> linear_grid(double start, double stop, std::size_t count);

} // namespace aoivoi
