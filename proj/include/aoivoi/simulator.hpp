#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aoivoi/analytic.hpp"
#include "aoivoi/model.hpp"
#include "aoivoi/policy.hpp"

namespace aoivoi {

// One inter-delivery interval of the sample path.
struct EpochRecord {
    std::size_t prior_class = 0; // class of the update delivered at the epoch start
    double prior_service = 0.0;  // its processing time
    double controlled_wait = 0.0;
    double exogenous_wait = 0.0; // gap until the admitted arrival
    double next_service = 0.0;   // processing time of the admitted sample
    double age_area = 0.0;       // integral of the age over the epoch
    double value_area = 0.0;     // integral of the prior update's value
    double duration = 0.0;
};

struct SimResult {
    std::uint64_t epochs = 0;
    std::uint64_t seed = 0;

    // Renewal-reward ratio estimators with delta-method standard errors.
    double aoi = 0.0;
    double aoi_se = 0.0;
    double voi = 0.0;
    double voi_se = 0.0;

    // Plain per-epoch means, for cross-checking the closed forms.
    double mean_age_area = 0.0;
    double age_area_se = 0.0;
    double mean_value_area = 0.0;
    double value_area_se = 0.0;
    double mean_duration = 0.0;
    double duration_se = 0.0;

    std::vector<std::uint64_t> admitted;   // admitted samples per class
    std::vector<double> wait_mean;         // controlled wait by prior class
    std::vector<double> wait_se;
    std::vector<std::uint64_t> wait_count; // epochs with that prior class

    std::uint64_t discarded = 0; // arrivals dropped (explicit mode only)
};

// Random draws used by the simulator; exposed so tests can reuse the exact
// same variates.
namespace mc {
double uniform01(std::mt19937_64& rng);
double draw_exponential(std::mt19937_64& rng, double rate); // rate may be +inf
double draw_service(std::mt19937_64& rng, const ServiceDistribution& dist);
std::size_t draw_class(std::mt19937_64& rng, const SystemSpec& spec);
} // namespace mc

// Epoch-recursion Monte Carlo of the blocking update system. Arrivals
// discarded while the server is busy or blocked are not simulated one by
// one: after the controlled wait, the remaining gap to the admitted sample
// is exponential with the arrival rate regardless of what was discarded, so
// the recursion is exact. Use simulate_explicit to validate that claim.
//
// The initial (class, service) pair is drawn from the stationary law and not
// counted. Identical inputs give bit-identical results.
SimResult simulate(const SystemSpec& spec, const ThresholdPolicy& policy,
                   std::uint64_t epochs, std::uint64_t seed,
                   std::vector<EpochRecord>* trace = nullptr);

// Debug mode: every exogenous arrival is generated and discarded explicitly,
// carrying the arrival process across epochs.
SimResult simulate_explicit(const SystemSpec& spec, const ThresholdPolicy& policy,
                            std::uint64_t epochs, std::uint64_t seed);

struct ValidationRow {
    std::string metric;
    double analytic = 0.0;
    double simulated = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool all_pass = false;
    SimResult sim;
};

// Closed forms vs. simulation, one row per metric; |z| > 4 fails.
ValidationReport validate(const SystemSpec& spec, const ThresholdPolicy& policy,
                          std::uint64_t epochs, std::uint64_t seed);

} // namespace aoivoi
