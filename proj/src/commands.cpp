#include "aoivoi/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "aoivoi/simulator.hpp"
#include "aoivoi/solver.hpp"

namespace aoivoi {

namespace {

using nlohmann::json;

// Route the report to --output if given, else to the command's stream.
int with_output(const RunConfig& config, std::ostream& out, std::ostream& err,
                const std::string& body) {
    if (config.output.empty()) {
        out << body;
        return kExitOk;
    }
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
        err << "error: cannot open output file '" << config.output << "'\n";
        return kExitConfigError;
    }
    file << body;
    return kExitOk;
}

json solution_json(const PolicySolution& sol, double beta) {
    json j;
    j["beta"] = beta;
    j["theta_star"] = sol.theta;
    j["aoi"] = sol.aoi;
    j["voi"] = sol.voi;
    j["objective"] = sol.objective;
    j["residual"] = sol.residual;
    j["iterations"] = sol.iterations;
    j["min_interupdate"] = sol.policy.min_interupdate;
    j["decay_factor"] = sol.policy.decay_factor;
    return j;
}

json sim_json(const SimResult& sim) {
    json j;
    j["epochs"] = sim.epochs;
    j["seed"] = sim.seed;
    j["aoi"] = sim.aoi;
    j["aoi_se"] = sim.aoi_se;
    j["voi"] = sim.voi;
    j["voi_se"] = sim.voi_se;
    j["mean_age_area"] = sim.mean_age_area;
    j["mean_value_area"] = sim.mean_value_area;
    j["mean_duration"] = sim.mean_duration;
    j["admitted"] = sim.admitted;
    j["wait_mean"] = sim.wait_mean;
    j["wait_se"] = sim.wait_se;
    return j;
}

std::string render_validation_table(const ValidationReport& report) {
    const auto sig = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.8g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << std::left << std::setw(14) << "metric" << std::right << std::setw(15) << "analytic"
       << "  " << std::setw(15) << "simulated" << "  " << std::setw(12) << "std.err" << "  "
       << std::setw(8) << "z" << "  status\n";
    for (const ValidationRow& row : report.rows) {
        char z_buf[32];
        std::snprintf(z_buf, sizeof(z_buf), "%.2f", row.z);
        os << std::left << std::setw(14) << row.metric << std::right << std::setw(15)
           << sig(row.analytic) << "  " << std::setw(15) << sig(row.simulated) << "  "
           << std::setw(12) << sig(row.std_error) << "  " << std::setw(8) << z_buf << "  "
           << (row.pass ? "ok" : "FAIL") << "\n";
    }
    return os.str();
}

json validation_json(const ValidationReport& report) {
    json rows = json::array();
    for (const ValidationRow& row : report.rows) {
        rows.push_back({{"metric", row.metric},
                        {"analytic", row.analytic},
                        {"simulated", row.simulated},
                        {"std_error", row.std_error},
                        {"z", row.z},
                        {"pass", row.pass}});
    }
    return json{{"rows", rows}, {"all_pass", report.all_pass}};
}

const char* variant_name(PhiVariant v) {
    return v == PhiVariant::mixture ? "mixture" : "per-class";
}

} // namespace

std::string frontier_csv(const std::vector<FrontierPoint>& points, std::size_t num_classes) {
    std::ostringstream os;
    os << "beta,theta_star,aoi,voi";
    for (std::size_t i = 1; i <= num_classes; ++i)
        os << ",ybar_" << i;
    os << "\n";
    for (const FrontierPoint& pt : points) {
        os << format_number(pt.beta) << ',' << format_number(pt.theta) << ','
           << format_number(pt.aoi) << ',' << format_number(pt.voi);
        for (double y : pt.min_interupdate)
            os << ',' << format_number(y);
        os << "\n";
    }
    return os.str();
}

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
    SystemSpec spec = config.make_spec();
    PolicySolution sol;
    try {
        sol = solve(spec, config.solver);
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    }

    std::string body;
    if (config.format == OutputFormat::structured) {
        body = solution_json(sol, spec.beta()).dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "theta_star  = " << format_number(sol.theta) << "\n";
        os << "aoi         = " << format_number(sol.aoi) << "\n";
        os << "voi         = " << format_number(sol.voi) << "\n";
        os << "objective   = " << format_number(sol.objective) << "\n";
        os << "residual    = " << format_number(sol.residual) << "\n";
        os << "iterations  = " << sol.iterations << "\n";
        for (std::size_t i = 0; i < sol.policy.min_interupdate.size(); ++i)
            os << "ybar_" << (i + 1) << "      = "
               << format_number(sol.policy.min_interupdate[i]) << "\n";
        if (spec.beta() == 0.0)
            os << "note: beta = 0, thresholds are identical across classes\n";
        body = os.str();
    }
    return with_output(config, out, err, body);
}

int run_frontier(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const std::vector<double> grid = config.resolve_beta_grid();
    // Weight placeholder; frontier() re-weights per grid point.
    SystemSpec spec = config.make_spec(grid.empty() ? 0.0 : grid.front());
    std::vector<FrontierPoint> points;
    try {
        points = frontier(spec, grid, config.solver);
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    }

    std::string body;
    if (config.format == OutputFormat::structured) {
        json j;
        j["points"] = json::array();
        for (const FrontierPoint& pt : points)
            j["points"].push_back({{"beta", pt.beta},
                                   {"theta_star", pt.theta},
                                   {"aoi", pt.aoi},
                                   {"voi", pt.voi},
                                   {"min_interupdate", pt.min_interupdate}});
        body = j.dump(2) + "\n";
    } else {
        body = frontier_csv(points, spec.num_classes());
    }
    return with_output(config, out, err, body);
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.epochs < 1) {
        err << "simulator.epochs: must be >= 1\n";
        return kExitConfigError;
    }
    SystemSpec spec = config.make_spec();
    PolicySolution sol;
    try {
        sol = solve(spec, config.solver);
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    }
    const SimResult sim = simulate(spec, sol.policy, config.epochs, config.seed);

    std::string body;
    if (config.format == OutputFormat::structured) {
        json j;
        j["solution"] = solution_json(sol, spec.beta());
        j["simulation"] = sim_json(sim);
        body = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "policy theta = " << format_number(sol.theta) << "\n";
        os << "epochs       = " << sim.epochs << "  (seed " << sim.seed << ")\n";
        os << "aoi          = " << format_number(sim.aoi) << " +/- "
           << format_number(sim.aoi_se) << "  (analytic " << format_number(sol.aoi) << ")\n";
        os << "voi          = " << format_number(sim.voi) << " +/- "
           << format_number(sim.voi_se) << "  (analytic " << format_number(sol.voi) << ")\n";
        body = os.str();
    }
    return with_output(config, out, err, body);
}

int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (config.epochs < 1) {
        err << "simulator.epochs: must be >= 1\n";
        return kExitConfigError;
    }

    std::vector<PhiVariant> variants;
    if (config.phi_both)
        variants = {PhiVariant::mixture, PhiVariant::per_class};
    else
        variants = {config.phi_variant};

    std::ostringstream text;
    json structured;
    structured["variants"] = json::array();
    bool any_pass = false;

    for (PhiVariant variant : variants) {
        SystemSpec spec = config.make_spec().with_phi_variant(variant);
        PolicySolution sol;
        try {
            sol = solve(spec, config.solver);
        } catch (const SolverError& e) {
            err << "solver error: " << e.what() << "\n";
            return kExitSolverError;
        }
        const ValidationReport report = validate(spec, sol.policy, config.epochs, config.seed);
        any_pass = any_pass || report.all_pass;

        text << "phi variant: " << variant_name(variant) << "  (theta_star "
             << format_number(sol.theta) << ")\n";
        text << render_validation_table(report);
        text << (report.all_pass ? "all checks passed" : "validation FAILED") << "\n\n";

        json entry = validation_json(report);
        entry["phi_variant"] = variant_name(variant);
        entry["theta_star"] = sol.theta;
        structured["variants"].push_back(entry);
    }

    if (config.phi_both) {
        std::string selected = "none";
        for (std::size_t k = 0; k < variants.size(); ++k)
            if (structured["variants"][k]["all_pass"].get<bool>())
                selected = variant_name(variants[k]);
        text << "selected variant: " << selected << "\n";
        structured["selected_variant"] = selected;
    }

    const std::string body = config.format == OutputFormat::structured
                                 ? structured.dump(2) + "\n"
                                 : text.str();
    const int io_rc = with_output(config, out, err, body);
    if (io_rc != kExitOk)
        return io_rc;
    return any_pass ? kExitOk : kExitValidationFailure;
}

} // namespace aoivoi
