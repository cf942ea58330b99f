#pragma once

#include <cstddef>
#include <vector>

#include "aoivoi/model.hpp"

namespace aoivoi {

// A class-dependent threshold waiting policy. After delivering an update of
// class i that took service time y, the sender blocks new samples for
// max(min_interupdate[i] - y, 0) before admitting the next arrival.
struct ThresholdPolicy {
    double theta = 0.0; // parameter the thresholds were derived from (NaN if handmade)
    double beta = 0.0;
    std::vector<double> min_interupdate; // per class, may be +infinity
    std::vector<double> decay_factor;    // per class

    bool all_finite() const;
};

// Value decay factor of class i: the initial value attenuated by the MGFs of
// the exogenous gap and of the next service time, both evaluated at minus the
// class decay rate. The variant selects whose service MGF stands in for the
// next update's processing time: class i's own, or the class mixture.
double value_decay_factor(const SystemSpec& spec, std::size_t i, PhiVariant variant);
double value_decay_factor(const SystemSpec& spec, std::size_t i);

// Waiting-threshold level shared by all classes for a given parameter theta.
double common_threshold(double theta, double beta, const MomentSet& moments);

// Class threshold function  (1-beta) t - beta phi e^{-alpha t}; strictly
// increasing whenever beta < 1, or beta == 1 with alpha > 0 and phi > 0.
double threshold_function(double t, double beta, double phi, double alpha);

// Unique t >= 0 with threshold_function(t) == tau. Throws DomainError when
// tau < -beta*phi, or when no finite inverse exists (beta == 1 with tau >= 0,
// or a constant threshold function).
double threshold_function_inverse(double tau, double beta, double phi, double alpha);

// Minimum inter-update time of a class: zero when the threshold level falls
// below the reachable range, +infinity in the degenerate beta == 1 region
// where the function never attains it.
double min_interupdate_time(double theta, double beta, double phi, double alpha,
                            const MomentSet& moments);

// Thresholds of every class for a given theta, under the system's phi variant.
ThresholdPolicy make_policy(const SystemSpec& spec, double theta);

// Policy with explicitly chosen per-class thresholds (decay factors are still
// derived from the system so value formulas stay consistent).
ThresholdPolicy make_policy_from_thresholds(const SystemSpec& spec,
                                            std::vector<double> min_interupdate);

// Zero-wait baseline: admit the first arrival after every delivery.
ThresholdPolicy zero_wait_policy(const SystemSpec& spec);

// Controlled wait after a class i delivery whose service took service_time.
// Rejects policies with any infinite threshold.
double controlled_wait(const ThresholdPolicy& policy, std::size_t i, double service_time);

} // namespace aoivoi
