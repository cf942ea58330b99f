#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "aoivoi/errors.hpp"

namespace aoivoi {

// Arrival rate value meaning "a fresh sample is available on demand":
// the exogenous gap X collapses to zero.
inline constexpr double kGenerateAtWill = std::numeric_limits<double>::infinity();

// Processing-time distribution of one update class.
class ServiceDistribution {
  public:
    enum class Kind { exponential, deterministic };

    static ServiceDistribution exponential(double rate);
    static ServiceDistribution deterministic(double duration);

    Kind kind() const { return kind_; }
    bool is_exponential() const { return kind_ == Kind::exponential; }

    double rate() const;     // exponential only
    double duration() const; // deterministic only

    double mean() const;
    double second_moment() const;

    // E[e^{sY}] for s <= 0; rejects s > 0.
    double mgf(double s) const;

  private:
    ServiceDistribution(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_; // rate or duration
};

// One update class: how often it occurs, what it is worth on delivery,
// how fast that worth decays, and how long it takes to process.
struct ClassSpec {
    double probability = 1.0;
    double initial_value = 0.0;
    double decay_rate = 0.0;
    ServiceDistribution service = ServiceDistribution::exponential(1.0);
};

// Which service MGF enters the value decay factor: the class's own
// (per_class) or the probability mixture over all classes (mixture).
// The two coincide for single-class systems; see value_decay_factor().
enum class PhiVariant { mixture, per_class };

// Immutable, validated description of the whole update system.
class SystemSpec {
  public:
    SystemSpec(std::vector<ClassSpec> classes, double arrival_rate, double beta,
               PhiVariant phi_variant = PhiVariant::mixture);

    const std::vector<ClassSpec>& classes() const { return classes_; }
    std::size_t num_classes() const { return classes_.size(); }
    const ClassSpec& cls(std::size_t i) const { return classes_.at(i); }

    double arrival_rate() const { return arrival_rate_; }
    bool generate_at_will() const;
    double beta() const { return beta_; }
    PhiVariant phi_variant() const { return phi_variant_; }

    SystemSpec with_beta(double beta) const;
    SystemSpec with_arrival_rate(double arrival_rate) const;
    SystemSpec with_phi_variant(PhiVariant v) const;

  private:
    void validate() const;

    std::vector<ClassSpec> classes_;
    double arrival_rate_;
    double beta_;
    PhiVariant phi_variant_;
};

// First and second moments of the mixture service time Y and of the
// uncontrolled delay Z = X + Y (X exponential with the arrival rate,
// identically zero under generate-at-will).
struct MomentSet {
    double mean_service = 0.0;   // E[Y]
    double second_service = 0.0; // E[Y^2]
    double mean_delay = 0.0;     // E[Z]
    double second_delay = 0.0;   // E[Z^2]
};

// E[e^{s Y_i}] of one class's service time; s <= 0.
double service_mgf(const ClassSpec& cls, double s);

// E[e^{s X}] of the exogenous arrival gap; equals 1 under generate-at-will.
double arrival_mgf(double arrival_rate, double s);

MomentSet mixture_moments(const SystemSpec& spec);

// Probability-weighted service MGF over all classes; s <= 0.
double mixture_mgf(const SystemSpec& spec, double s);

// Absolute tolerance on |sum p_i - 1|. Inputs are never renormalized.
inline constexpr double kProbabilitySumTolerance = 1e-12;

} // namespace aoivoi
