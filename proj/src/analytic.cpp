#include "aoivoi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aoivoi {

namespace {

void require_finite(const ThresholdPolicy& policy) {
    if (!policy.all_finite())
        throw DomainError("epoch expectations need finite thresholds");
}

void require_match(const SystemSpec& spec, const ThresholdPolicy& policy) {
    if (policy.min_interupdate.size() != spec.num_classes() ||
        policy.decay_factor.size() != spec.num_classes())
        throw SpecError("policy size does not match the number of classes");
}

} // namespace

WaitMoments wait_moments(const ClassSpec& cls, double ybar) {
    if (!(ybar >= 0.0) || std::isinf(ybar))
        throw DomainError("wait moments need a finite threshold >= 0");
    WaitMoments m;
    if (cls.service.is_exponential()) {
        const double mu = cls.service.rate();
        const double x = mu * ybar;
        if (x < 1e-2) {
            // Small-x series; the closed forms lose ~eps/x digits to
            // cancellation below this scale.
            //   mean   = (x^2/2 - x^3/6 + x^4/24 - ...) / mu
            //   second = (x^3/3 - x^4/12 + x^5/60 - ...) / mu^2
            double term = x * x / 2.0;
            double mean = 0.0;
            for (int k = 2; k <= 12; ++k) {
                mean += term;
                term *= -x / static_cast<double>(k + 1);
            }
            term = x * x * x / 3.0;
            double second = 0.0;
            for (int k = 3; k <= 13; ++k) {
                second += term;
                term *= -x / static_cast<double>(k + 1);
            }
            m.mean = mean / mu;
            m.second = second / (mu * mu);
        } else {
            const double e = std::exp(-x);
            m.mean = ybar - 1.0 / mu + e / mu;
            m.second = ybar * ybar - 2.0 * m.mean / mu;
        }
    } else {
        m.mean = std::max(ybar - cls.service.duration(), 0.0);
        m.second = m.mean * m.mean;
    }
    return m;
}

double max_service_mgf(const ClassSpec& cls, double ybar, double s) {
    if (s > 0.0)
        throw DomainError("max-service MGF is only supported for s <= 0");
    if (!(ybar >= 0.0) || std::isinf(ybar))
        throw DomainError("max-service MGF needs a finite threshold >= 0");
    if (!cls.service.is_exponential())
        return std::exp(s * std::max(ybar, cls.service.duration()));
    const double mu = cls.service.rate();
    return std::exp(s * ybar) * (-std::expm1(-mu * ybar)) +
           mu / (mu - s) * std::exp(-(mu - s) * ybar);
}

double expected_age(const SystemSpec& spec, const ThresholdPolicy& policy,
                    const MomentSet& moments) {
    require_match(spec, policy);
    require_finite(policy);
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.num_classes(); ++i) {
        const double ybar = policy.min_interupdate[i];
        const WaitMoments w = wait_moments(spec.cls(i), ybar);
        acc += spec.cls(i).probability *
               ((ybar + moments.mean_delay) * w.mean - 0.5 * w.second);
    }
    return acc + moments.mean_service * moments.mean_delay + 0.5 * moments.second_delay;
}

double expected_value(const SystemSpec& spec, const ThresholdPolicy& policy,
                      const MomentSet& moments) {
    require_match(spec, policy);
    require_finite(policy);
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.num_classes(); ++i) {
        const ClassSpec& c = spec.cls(i);
        const double ybar = policy.min_interupdate[i];
        if (c.decay_rate > 0.0) {
            const double s = -c.decay_rate;
            acc += c.probability / c.decay_rate *
                   (c.initial_value * service_mgf(c, s) -
                    policy.decay_factor[i] * max_service_mgf(c, ybar, s));
        } else {
            // No decay: value accrues linearly over the whole epoch.
            acc += c.probability * c.initial_value *
                   (wait_moments(c, ybar).mean + moments.mean_delay);
        }
    }
    return acc;
}

double expected_epoch(const SystemSpec& spec, const ThresholdPolicy& policy,
                      const MomentSet& moments) {
    require_match(spec, policy);
    require_finite(policy);
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.num_classes(); ++i)
        acc += spec.cls(i).probability *
               wait_moments(spec.cls(i), policy.min_interupdate[i]).mean;
    return acc + moments.mean_delay;
}

EpochExpectations epoch_expectations(const SystemSpec& spec, const ThresholdPolicy& policy) {
    require_match(spec, policy);
    require_finite(policy);
    const MomentSet moments = mixture_moments(spec);
    EpochExpectations e;
    e.wait_mean.reserve(spec.num_classes());
    e.wait_second.reserve(spec.num_classes());
    e.max_mgf.reserve(spec.num_classes());
    for (std::size_t i = 0; i < spec.num_classes(); ++i) {
        const WaitMoments w = wait_moments(spec.cls(i), policy.min_interupdate[i]);
        e.wait_mean.push_back(w.mean);
        e.wait_second.push_back(w.second);
        e.max_mgf.push_back(
            max_service_mgf(spec.cls(i), policy.min_interupdate[i], -spec.cls(i).decay_rate));
    }
    e.age = expected_age(spec, policy, moments);
    e.value = expected_value(spec, policy, moments);
    e.duration = expected_epoch(spec, policy, moments);
    return e;
}

Metrics metrics(const SystemSpec& spec, const ThresholdPolicy& policy) {
    const MomentSet moments = mixture_moments(spec);
    Metrics m;
    const double duration = expected_epoch(spec, policy, moments);
    m.aoi = expected_age(spec, policy, moments) / duration;
    m.voi = expected_value(spec, policy, moments) / duration;
    return m;
}

double dinkelbach_objective(const SystemSpec& spec, double theta) {
    const ThresholdPolicy policy = make_policy(spec, theta);
    if (!policy.all_finite())
        return -std::numeric_limits<double>::infinity();
    const MomentSet moments = mixture_moments(spec);
    const double beta = spec.beta();
    return (1.0 - beta) * expected_age(spec, policy, moments) -
           beta * expected_value(spec, policy, moments) -
           theta * expected_epoch(spec, policy, moments);
}

} // namespace aoivoi
