#include "aoivoi/model.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace aoivoi {

ServiceDistribution ServiceDistribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw SpecError("service rate must be finite and > 0");
    return ServiceDistribution(Kind::exponential, rate);
}

ServiceDistribution ServiceDistribution::deterministic(double duration) {
    if (!(duration >= 0.0) || !std::isfinite(duration))
        throw SpecError("service duration must be finite and >= 0");
    return ServiceDistribution(Kind::deterministic, duration);
}

double ServiceDistribution::rate() const {
    if (kind_ != Kind::exponential)
        throw DomainError("rate() called on a non-exponential distribution");
    return param_;
}

double ServiceDistribution::duration() const {
    if (kind_ != Kind::deterministic)
        throw DomainError("duration() called on a non-deterministic distribution");
    return param_;
}

double ServiceDistribution::mean() const {
    return kind_ == Kind::exponential ? 1.0 / param_ : param_;
}

double ServiceDistribution::second_moment() const {
    return kind_ == Kind::exponential ? 2.0 / (param_ * param_) : param_ * param_;
}

double ServiceDistribution::mgf(double s) const {
    if (s > 0.0)
        throw DomainError("service MGF is only supported for s <= 0");
    if (kind_ == Kind::exponential)
        return param_ / (param_ - s);
    return std::exp(s * param_);
}

SystemSpec::SystemSpec(std::vector<ClassSpec> classes, double arrival_rate, double beta,
                       PhiVariant phi_variant)
    : classes_(std::move(classes)), arrival_rate_(arrival_rate), beta_(beta),
      phi_variant_(phi_variant) {
    validate();
}

bool SystemSpec::generate_at_will() const {
    return std::isinf(arrival_rate_);
}

SystemSpec SystemSpec::with_beta(double beta) const {
    return SystemSpec(classes_, arrival_rate_, beta, phi_variant_);
}

SystemSpec SystemSpec::with_arrival_rate(double arrival_rate) const {
    return SystemSpec(classes_, arrival_rate, beta_, phi_variant_);
}

SystemSpec SystemSpec::with_phi_variant(PhiVariant v) const {
    return SystemSpec(classes_, arrival_rate_, beta_, v);
}

void SystemSpec::validate() const {
    if (classes_.empty())
        throw SpecError("classes: at least one class is required");
    if (std::isnan(arrival_rate_) || !(arrival_rate_ > 0.0))
        throw SpecError("lambda: arrival rate must be > 0 (or inf for generate-at-will)");
    if (!(beta_ >= 0.0 && beta_ <= 1.0))
        throw SpecError("beta: weight must lie in [0,1]");

    double prob_sum = 0.0;
    double mean_service = 0.0;
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const ClassSpec& c = classes_[i];
        const std::string at = "classes[" + std::to_string(i) + "].";
        if (!(c.probability >= 0.0 && c.probability <= 1.0))
            throw SpecError(at + "probability: must lie in [0,1]");
        if (!(c.initial_value >= 0.0) || !std::isfinite(c.initial_value))
            throw SpecError(at + "value: must be finite and >= 0");
        if (!(c.decay_rate >= 0.0) || !std::isfinite(c.decay_rate))
            throw SpecError(at + "decay: must be finite and >= 0");
        if (beta_ == 1.0 && c.decay_rate == 0.0)
            throw SpecError(at + "decay: beta = 1 requires every decay rate > 0 "
                                 "(otherwise waiting forever is optimal)");
        prob_sum += c.probability;
        mean_service += c.probability * c.service.mean();
    }
    if (std::abs(prob_sum - 1.0) > kProbabilitySumTolerance)
        throw SpecError("classes[*].probability: values sum to " + std::to_string(prob_sum) +
                        ", expected 1 within 1e-12 (inputs are not renormalized)");
    if (!(mean_service > 0.0))
        throw SpecError("classes: mixture mean service time must be > 0");
}

double service_mgf(const ClassSpec& cls, double s) {
    return cls.service.mgf(s);
}

double arrival_mgf(double arrival_rate, double s) {
    if (s > 0.0)
        throw DomainError("arrival MGF is only supported for s <= 0");
    if (std::isinf(arrival_rate))
        return 1.0; // X is identically zero
    return arrival_rate / (arrival_rate - s);
}

MomentSet mixture_moments(const SystemSpec& spec) {
    MomentSet m;
    for (const ClassSpec& c : spec.classes()) {
        m.mean_service += c.probability * c.service.mean();
        m.second_service += c.probability * c.service.second_moment();
    }
    if (spec.generate_at_will()) {
        m.mean_delay = m.mean_service;
        m.second_delay = m.second_service;
    } else {
        const double lambda = spec.arrival_rate();
        m.mean_delay = 1.0 / lambda + m.mean_service;
        m.second_delay = 2.0 / (lambda * lambda) + (2.0 / lambda) * m.mean_service +
                         m.second_service;
    }
    return m;
}

double mixture_mgf(const SystemSpec& spec, double s) {
    double acc = 0.0;
    for (const ClassSpec& c : spec.classes())
        acc += c.probability * c.service.mgf(s);
    return acc;
}

} // namespace aoivoi
