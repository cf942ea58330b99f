#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "aoivoi/model.hpp"
#include "aoivoi/policy.hpp"

namespace aoivoi {

// Closed-form per-epoch expectations for a threshold policy.
struct EpochExpectations {
    double age = 0.0;      // E[A_k], accumulated age over one epoch
    double value = 0.0;    // E[V_k], accumulated value over one epoch
    double duration = 0.0; // E[T_k]
    std::vector<double> wait_mean;   // E[W_i] by prior class
    std::vector<double> wait_second; // E[W_i^2] by prior class
    std::vector<double> max_mgf;     // E[e^{-alpha_i max(ybar_i, Y_i)}] by prior class
};

struct WaitMoments {
    double mean = 0.0;
    double second = 0.0;
};

// E[(ybar - Y)^+] and E[((ybar - Y)^+)^2] for one class's service time.
WaitMoments wait_moments(const ClassSpec& cls, double ybar);

// E[e^{s max(ybar, Y)}] for one class's service time; s <= 0.
double max_service_mgf(const ClassSpec& cls, double ybar, double s);

double expected_age(const SystemSpec& spec, const ThresholdPolicy& policy,
                    const MomentSet& moments);
double expected_value(const SystemSpec& spec, const ThresholdPolicy& policy,
                      const MomentSet& moments);
double expected_epoch(const SystemSpec& spec, const ThresholdPolicy& policy,
                      const MomentSet& moments);

EpochExpectations epoch_expectations(const SystemSpec& spec, const ThresholdPolicy& policy);

struct Metrics {
    double aoi = 0.0;
    double voi = 0.0;
};

// Long-run time averages: ratios of the epoch expectations.
Metrics metrics(const SystemSpec& spec, const ThresholdPolicy& policy);

// Auxiliary objective (1-beta) E[A] - beta E[V] - theta E[T], evaluated at the
// theta-induced threshold policy. Strictly decreasing in theta; returns
// -infinity in the degenerate region where the policy waits forever (that
// region lies above the root, so a bracketing search must treat it as
// negative).
double dinkelbach_objective(const SystemSpec& spec, double theta);

} // namespace aoivoi
