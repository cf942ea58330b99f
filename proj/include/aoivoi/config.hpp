#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aoivoi/model.hpp"
#include "aoivoi/solver.hpp"

namespace aoivoi {

enum class OutputFormat { text, csv, structured };

// Everything a command needs, as read from the config document plus
// command-line overrides.
struct RunConfig {
    std::vector<ClassSpec> classes;
    double arrival_rate = 0.0;
    std::optional<double> beta;          // required by solve/simulate/validate
    PhiVariant phi_variant = PhiVariant::mixture;
    bool phi_both = false;               // validate: run both variants and compare

    SolveOptions solver;
    std::optional<std::vector<double>> beta_grid;

    std::uint64_t epochs = 1'000'000;
    std::uint64_t seed = 1;

    std::string output;                  // empty = stdout
    OutputFormat format = OutputFormat::text;

    // Builds the validated spec; throws SpecError when beta is missing.
    SystemSpec make_spec() const;
    SystemSpec make_spec(double beta_value) const;

    // Grid for frontier sweeps; defaults to 41 points on [0, 0.999].
    std::vector<double> resolve_beta_grid() const;
};

// Parses the JSON config document. Throws SpecError with a line- or
// field-specific message on malformed input.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// "start:stop:count" -> evenly spaced grid.
std::vector<double> parse_beta_grid(const std::string& arg);

// Shortest decimal that round-trips, capped at 12 significant digits.
std::string format_number(double v);

} // namespace aoivoi
