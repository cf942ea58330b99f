#include "aoivoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aoivoi {

namespace mc {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

double draw_exponential(std::mt19937_64& rng, double rate) {
    if (std::isinf(rate))
        return 0.0;
    return -std::log1p(-uniform01(rng)) / rate;
}

double draw_service(std::mt19937_64& rng, const ServiceDistribution& dist) {
    if (dist.is_exponential())
        return draw_exponential(rng, dist.rate());
    return dist.duration();
}

std::size_t draw_class(std::mt19937_64& rng, const SystemSpec& spec) {
    const double u = uniform01(rng);
    double cum = 0.0;
    const std::size_t n = spec.num_classes();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cum += spec.cls(i).probability;
        if (u < cum)
            return i;
    }
    return n - 1;
}

} // namespace mc

namespace {

// Online means and central co-moments of the per-epoch triple (A, V, T).
struct EpochStats {
    std::uint64_t n = 0;
    double mean_a = 0.0, mean_v = 0.0, mean_t = 0.0;
    double m2_a = 0.0, m2_v = 0.0, m2_t = 0.0;
    double c_at = 0.0, c_vt = 0.0;

    void add(double a, double v, double t) {
        ++n;
        const double da = a - mean_a;
        const double dv = v - mean_v;
        const double dt = t - mean_t;
        const double inv = 1.0 / static_cast<double>(n);
        mean_a += da * inv;
        mean_v += dv * inv;
        mean_t += dt * inv;
        m2_a += da * (a - mean_a);
        m2_v += dv * (v - mean_v);
        m2_t += dt * (t - mean_t);
        c_at += da * (t - mean_t);
        c_vt += dv * (t - mean_t);
    }
};

struct WaitStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double w) {
        ++n;
        const double d = w - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (w - mean);
    }
};

double mean_se(double m2, std::uint64_t n) {
    if (n < 2)
        return 0.0;
    const double var = m2 / static_cast<double>(n - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
}

// Delta-method standard error of the ratio of means r = x̄/t̄.
double ratio_se(double r, double m2_x, double m2_t, double c_xt, double mean_t,
                std::uint64_t n) {
    if (n < 2)
        return 0.0;
    const double denom = static_cast<double>(n - 1);
    const double var = (m2_x / denom - 2.0 * r * (c_xt / denom) + r * r * (m2_t / denom)) /
                       (static_cast<double>(n) * mean_t * mean_t);
    return std::sqrt(std::max(var, 0.0));
}

// Exact accumulated value of the prior update over an epoch of length t.
double epoch_value(const ClassSpec& cls, double prior_service, double t) {
    if (cls.decay_rate == 0.0)
        return cls.initial_value * t;
    return cls.initial_value / cls.decay_rate * std::exp(-cls.decay_rate * prior_service) *
           (-std::expm1(-cls.decay_rate * t));
}

void check_sim_inputs(const SystemSpec& spec, const ThresholdPolicy& policy,
                      std::uint64_t epochs) {
    if (policy.min_interupdate.size() != spec.num_classes())
        throw SpecError("policy size does not match the number of classes");
    if (!policy.all_finite())
        throw DomainError("cannot simulate a policy with infinite thresholds");
    if (epochs < 1)
        throw SpecError("epoch count must be >= 1");
}

SimResult finalize(const SystemSpec& spec, const EpochStats& stats,
                   const std::vector<WaitStats>& waits,
                   std::vector<std::uint64_t> admitted, std::uint64_t seed,
                   std::uint64_t discarded) {
    SimResult r;
    r.epochs = stats.n;
    r.seed = seed;
    r.discarded = discarded;
    r.aoi = stats.mean_a / stats.mean_t;
    r.voi = stats.mean_v / stats.mean_t;
    r.aoi_se = ratio_se(r.aoi, stats.m2_a, stats.m2_t, stats.c_at, stats.mean_t, stats.n);
    r.voi_se = ratio_se(r.voi, stats.m2_v, stats.m2_t, stats.c_vt, stats.mean_t, stats.n);
    r.mean_age_area = stats.mean_a;
    r.age_area_se = mean_se(stats.m2_a, stats.n);
    r.mean_value_area = stats.mean_v;
    r.value_area_se = mean_se(stats.m2_v, stats.n);
    r.mean_duration = stats.mean_t;
    r.duration_se = mean_se(stats.m2_t, stats.n);
    r.admitted = std::move(admitted);
    r.wait_mean.reserve(spec.num_classes());
    r.wait_se.reserve(spec.num_classes());
    r.wait_count.reserve(spec.num_classes());
    for (const WaitStats& w : waits) {
        r.wait_mean.push_back(w.mean);
        r.wait_se.push_back(mean_se(w.m2, w.n));
        r.wait_count.push_back(w.n);
    }
    return r;
}

} // namespace

SimResult simulate(const SystemSpec& spec, const ThresholdPolicy& policy,
                   std::uint64_t epochs, std::uint64_t seed,
                   std::vector<EpochRecord>* trace) {
    check_sim_inputs(spec, policy, epochs);
    std::mt19937_64 rng(seed);

    // Stationary start: classes and services are i.i.d. across updates, so
    // one draw puts the (prior class, prior service) chain in steady state.
    std::size_t prior = mc::draw_class(rng, spec);
    double prior_service = mc::draw_service(rng, spec.cls(prior).service);

    EpochStats stats;
    std::vector<WaitStats> waits(spec.num_classes());
    std::vector<std::uint64_t> admitted(spec.num_classes(), 0);
    if (trace)
        trace->reserve(trace->size() + epochs);

    for (std::uint64_t k = 0; k < epochs; ++k) {
        const double wait = controlled_wait(policy, prior, prior_service);
        const double gap = mc::draw_exponential(rng, spec.arrival_rate());
        const std::size_t next = mc::draw_class(rng, spec);
        const double service = mc::draw_service(rng, spec.cls(next).service);

        const double duration = wait + gap + service;
        const double age_area = prior_service * duration + 0.5 * duration * duration;
        const double value_area = epoch_value(spec.cls(prior), prior_service, duration);

        stats.add(age_area, value_area, duration);
        waits[prior].add(wait);
        ++admitted[next];
        if (trace)
            trace->push_back({prior, prior_service, wait, gap, service, age_area,
                              value_area, duration});

        prior = next;
        prior_service = service;
    }
    return finalize(spec, stats, waits, std::move(admitted), seed, 0);
}

SimResult simulate_explicit(const SystemSpec& spec, const ThresholdPolicy& policy,
                            std::uint64_t epochs, std::uint64_t seed) {
    check_sim_inputs(spec, policy, epochs);
    std::mt19937_64 rng(seed);

    std::size_t prior = mc::draw_class(rng, spec);
    double prior_service = mc::draw_service(rng, spec.cls(prior).service);

    EpochStats stats;
    std::vector<WaitStats> waits(spec.num_classes());
    std::vector<std::uint64_t> admitted(spec.num_classes(), 0);
    std::uint64_t discarded = 0;

    // Absolute clock; the arrival stream runs independently of deliveries.
    double now = 0.0;
    double next_arrival = mc::draw_exponential(rng, spec.arrival_rate());

    for (std::uint64_t k = 0; k < epochs; ++k) {
        const double wait = controlled_wait(policy, prior, prior_service);
        const double block_end = now + wait;
        double admit_time;
        if (spec.generate_at_will()) {
            admit_time = block_end; // a fresh sample is always on hand
        } else {
            // Everything landing during the controlled wait (or landing during
            // the previous service, already behind block_end) is dropped.
            while (next_arrival < block_end) {
                ++discarded;
                next_arrival += mc::draw_exponential(rng, spec.arrival_rate());
            }
            admit_time = next_arrival;
            next_arrival += mc::draw_exponential(rng, spec.arrival_rate());
        }

        const std::size_t next = mc::draw_class(rng, spec);
        const double service = mc::draw_service(rng, spec.cls(next).service);

        const double gap = admit_time - block_end;
        const double duration = wait + gap + service;
        const double age_area = prior_service * duration + 0.5 * duration * duration;
        const double value_area = epoch_value(spec.cls(prior), prior_service, duration);

        stats.add(age_area, value_area, duration);
        waits[prior].add(wait);
        ++admitted[next];

        now = admit_time + service;
        prior = next;
        prior_service = service;
    }
    return finalize(spec, stats, waits, std::move(admitted), seed, discarded);
}

ValidationReport validate(const SystemSpec& spec, const ThresholdPolicy& policy,
                          std::uint64_t epochs, std::uint64_t seed) {
    const EpochExpectations expect = epoch_expectations(spec, policy);
    const Metrics m = metrics(spec, policy);

    ValidationReport report;
    report.sim = simulate(spec, policy, epochs, seed);
    const SimResult& sim = report.sim;

    const auto add_row = [&report](std::string name, double analytic, double simulated,
                                   double se) {
        ValidationRow row;
        row.metric = std::move(name);
        row.analytic = analytic;
        row.simulated = simulated;
        row.std_error = se;
        const double diff = simulated - analytic;
        if (se > 0.0)
            row.z = diff / se;
        else
            row.z = std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(analytic))
                        ? 0.0
                        : std::numeric_limits<double>::infinity();
        row.pass = std::abs(row.z) <= 4.0;
        report.rows.push_back(std::move(row));
    };

    add_row("AoI", m.aoi, sim.aoi, sim.aoi_se);
    add_row("VoI", m.voi, sim.voi, sim.voi_se);
    add_row("E[A]", expect.age, sim.mean_age_area, sim.age_area_se);
    add_row("E[V]", expect.value, sim.mean_value_area, sim.value_area_se);
    add_row("E[T]", expect.duration, sim.mean_duration, sim.duration_se);
    for (std::size_t i = 0; i < spec.num_classes(); ++i) {
        if (sim.wait_count[i] == 0)
            continue; // class never occurred as prior; nothing to compare
        add_row("E[W] class " + std::to_string(i + 1), expect.wait_mean[i],
                sim.wait_mean[i], sim.wait_se[i]);
    }

    report.all_pass = std::all_of(report.rows.begin(), report.rows.end(),
                                  [](const ValidationRow& r) { return r.pass; });
    return report;
}

} // namespace aoivoi
