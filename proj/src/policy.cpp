#include "aoivoi/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace aoivoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance on t for the Newton iteration.
constexpr double kInverseTol = 1e-12;

} // namespace

bool ThresholdPolicy::all_finite() const {
    for (double y : min_interupdate)
        if (std::isinf(y))
            return false;
    return true;
}

double value_decay_factor(const SystemSpec& spec, std::size_t i, PhiVariant variant) {
    const ClassSpec& c = spec.cls(i);
    const double s = -c.decay_rate;
    const double service_part = variant == PhiVariant::per_class ? service_mgf(c, s)
                                                                 : mixture_mgf(spec, s);
    return c.initial_value * arrival_mgf(spec.arrival_rate(), s) * service_part;
}

double value_decay_factor(const SystemSpec& spec, std::size_t i) {
    return value_decay_factor(spec, i, spec.phi_variant());
}

double common_threshold(double theta, double beta, const MomentSet& moments) {
    return theta - (1.0 - beta) * moments.mean_delay;
}

double threshold_function(double t, double beta, double phi, double alpha) {
    return (1.0 - beta) * t - beta * phi * std::exp(-alpha * t);
}

double threshold_function_inverse(double tau, double beta, double phi, double alpha) {
    const double floor = -beta * phi; // value at t = 0
    if (!(tau >= floor))
        throw DomainError("threshold level below the function's minimum");

    if (beta == 0.0)
        return tau; // identity map

    const double bbar = 1.0 - beta;
    if (beta * phi == 0.0 || alpha == 0.0) {
        // Linear: (1-beta) t - beta*phi.
        if (bbar <= 0.0)
            throw DomainError("constant threshold function has no inverse");
        return std::max((tau - floor) / bbar, 0.0);
    }
    if (beta == 1.0) {
        // Pure decay term: -phi e^{-alpha t}.
        if (tau >= 0.0)
            throw DomainError("threshold function never attains non-negative levels at beta = 1");
        return -std::log(-tau / phi) / alpha;
    }

    // General case: increasing and concave, so Newton from any point left of
    // the root stays left and converges monotonically. Initial guess and a
    // doubling upper bracket keep it safe regardless.
    const auto h = [&](double t) { return bbar * t - beta * phi * std::exp(-alpha * t); };
    const auto h_deriv = [&](double t) { return bbar + alpha * beta * phi * std::exp(-alpha * t); };

    double lo = std::max(tau / bbar, 0.0); // h(lo) <= tau
    double hi = std::max(lo, 1.0);
    while (h(hi) < tau)
        hi *= 2.0;

    double t = lo;
    for (int iter = 0; iter < 200; ++iter) {
        const double f = h(t) - tau;
        if (f == 0.0)
            return t;
        if (f < 0.0)
            lo = t;
        else
            hi = t;
        double next = t - f / h_deriv(t);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi); // bisection safeguard
        if (std::abs(next - t) <= kInverseTol * std::max(1.0, std::abs(next)))
            return std::max(next, 0.0);
        t = next;
    }
    return std::max(t, 0.0);
}

double min_interupdate_time(double theta, double beta, double phi, double alpha,
                            const MomentSet& moments) {
    const double tau = common_threshold(theta, beta, moments);
    if (tau < -beta * phi)
        return 0.0;
    if (beta == 1.0 && tau >= 0.0)
        return kInf; // never update again; rejected downstream
    return threshold_function_inverse(tau, beta, phi, alpha);
}

ThresholdPolicy make_policy(const SystemSpec& spec, double theta) {
    const MomentSet moments = mixture_moments(spec);
    ThresholdPolicy policy;
    policy.theta = theta;
    policy.beta = spec.beta();
    policy.min_interupdate.reserve(spec.num_classes());
    policy.decay_factor.reserve(spec.num_classes());
    for (std::size_t i = 0; i < spec.num_classes(); ++i) {
        const double phi = value_decay_factor(spec, i);
        const ClassSpec& c = spec.cls(i);
        policy.decay_factor.push_back(phi);
        policy.min_interupdate.push_back(
            min_interupdate_time(theta, spec.beta(), phi, c.decay_rate, moments));
    }
    return policy;
}

ThresholdPolicy make_policy_from_thresholds(const SystemSpec& spec,
                                            std::vector<double> min_interupdate) {
    if (min_interupdate.size() != spec.num_classes())
        throw SpecError("threshold count does not match the number of classes");
    for (double y : min_interupdate)
        if (!(y >= 0.0))
            throw SpecError("thresholds must be >= 0");
    ThresholdPolicy policy;
    policy.theta = std::numeric_limits<double>::quiet_NaN();
    policy.beta = spec.beta();
    policy.min_interupdate = std::move(min_interupdate);
    policy.decay_factor.reserve(spec.num_classes());
    for (std::size_t i = 0; i < spec.num_classes(); ++i)
        policy.decay_factor.push_back(value_decay_factor(spec, i));
    return policy;
}

ThresholdPolicy zero_wait_policy(const SystemSpec& spec) {
    return make_policy_from_thresholds(spec, std::vector<double>(spec.num_classes(), 0.0));
}

double controlled_wait(const ThresholdPolicy& policy, std::size_t i, double service_time) {
    if (!policy.all_finite())
        throw DomainError("policy has an infinite minimum inter-update time");
    if (!(service_time >= 0.0))
        throw DomainError("service time must be >= 0");
    return std::max(policy.min_interupdate.at(i) - service_time, 0.0);
}

} // namespace aoivoi
