#include "aoivoi/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aoivoi {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SpecError(path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        fail(path + "." + key, "missing required field");
    return *it;
}

double number_at(const json& v, const std::string& path) {
    if (!v.is_number())
        fail(path, "expected a number");
    return v.get<double>();
}

double arrival_rate_at(const json& v, const std::string& path) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (s == "inf" || s == "infinity")
            return kGenerateAtWill;
        fail(path, "expected a number or \"inf\"");
    }
    return number_at(v, path);
}

PhiVariant phi_variant_at(const json& v, const std::string& path) {
    if (!v.is_string())
        fail(path, "expected \"mixture\" or \"per-class\"");
    const std::string s = v.get<std::string>();
    if (s == "mixture")
        return PhiVariant::mixture;
    if (s == "per-class" || s == "per_class")
        return PhiVariant::per_class;
    fail(path, "unknown phi variant '" + s + "' (expected \"mixture\" or \"per-class\")");
}

ServiceDistribution service_at(const json& v, const std::string& path) {
    if (!v.is_object())
        fail(path, "expected an object with a \"type\" field");
    const json& type_field = member(v, path, "type");
    if (!type_field.is_string())
        fail(path + ".type", "expected a string");
    const std::string type = type_field.get<std::string>();
    try {
        if (type == "exponential")
            return ServiceDistribution::exponential(
                number_at(member(v, path, "rate"), path + ".rate"));
        if (type == "deterministic")
            return ServiceDistribution::deterministic(
                number_at(member(v, path, "duration"), path + ".duration"));
    } catch (const SpecError& e) {
        fail(path, e.what());
    }
    fail(path + ".type", "unknown service type '" + type + "'");
}

std::uint64_t count_at(const json& v, const std::string& path) {
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto x = v.get<long long>();
        if (x < 0)
            fail(path, "expected a non-negative integer");
        return static_cast<std::uint64_t>(x);
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (x >= 0.0 && x == std::floor(x) && x <= 9.0e15)
            return static_cast<std::uint64_t>(x);
    }
    fail(path, "expected a non-negative integer");
}

} // namespace

SystemSpec RunConfig::make_spec() const {
    if (!beta)
        throw SpecError("system.beta: required for this command (or pass --beta)");
    return make_spec(*beta);
}

SystemSpec RunConfig::make_spec(double beta_value) const {
    return SystemSpec(classes, arrival_rate, beta_value, phi_variant);
}

std::vector<double> RunConfig::resolve_beta_grid() const {
    if (beta_grid)
        return *beta_grid;
    return linear_grid(0.0, 0.999, 41);
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // The parser reports a byte offset; turn it into a line number.
        std::size_t line = 1;
        for (std::size_t k = 0; k < e.byte && k < text.size(); ++k)
            if (text[k] == '\n')
                ++line;
        throw SpecError("config line " + std::to_string(line) + ": " + e.what());
    }
    if (!doc.is_object())
        fail("config", "top level must be an object");

    RunConfig cfg;

    const json& system = member(doc, "config", "system");
    if (!system.is_object())
        fail("system", "expected an object");
    cfg.arrival_rate = arrival_rate_at(member(system, "system", "lambda"), "system.lambda");
    if (auto it = system.find("beta"); it != system.end())
        cfg.beta = number_at(*it, "system.beta");
    if (auto it = system.find("phi_variant"); it != system.end())
        cfg.phi_variant = phi_variant_at(*it, "system.phi_variant");

    const json& classes = member(doc, "config", "classes");
    if (!classes.is_array() || classes.empty())
        fail("classes", "expected a non-empty array");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const std::string path = "classes[" + std::to_string(i) + "]";
        const json& c = classes.at(i);
        if (!c.is_object())
            fail(path, "expected an object");
        ClassSpec spec;
        spec.probability = number_at(member(c, path, "probability"), path + ".probability");
        spec.initial_value = number_at(member(c, path, "value"), path + ".value");
        spec.decay_rate = number_at(member(c, path, "decay"), path + ".decay");
        spec.service = service_at(member(c, path, "service"), path + ".service");
        cfg.classes.push_back(spec);
    }

    if (auto solver = doc.find("solver"); solver != doc.end()) {
        if (!solver->is_object())
            fail("solver", "expected an object");
        if (auto it = solver->find("tolerance"); it != solver->end())
            cfg.solver.tolerance = number_at(*it, "solver.tolerance");
        if (auto it = solver->find("max_iterations"); it != solver->end())
            cfg.solver.max_iterations =
                static_cast<int>(count_at(*it, "solver.max_iterations"));
        if (auto it = solver->find("beta_grid"); it != solver->end()) {
            std::vector<double> grid;
            if (it->is_array()) {
                for (std::size_t k = 0; k < it->size(); ++k)
                    grid.push_back(number_at(it->at(k),
                                             "solver.beta_grid[" + std::to_string(k) + "]"));
            } else if (it->is_object()) {
                const double start =
                    number_at(member(*it, "solver.beta_grid", "start"), "solver.beta_grid.start");
                const double stop =
                    number_at(member(*it, "solver.beta_grid", "stop"), "solver.beta_grid.stop");
                const std::uint64_t count =
                    count_at(member(*it, "solver.beta_grid", "count"), "solver.beta_grid.count");
                grid = linear_grid(start, stop, count);
            } else {
                fail("solver.beta_grid", "expected an array or {start, stop, count}");
            }
            cfg.beta_grid = std::move(grid);
        }
    }

    if (auto sim = doc.find("simulator"); sim != doc.end()) {
        if (!sim->is_object())
            fail("simulator", "expected an object");
        if (auto it = sim->find("epochs"); it != sim->end())
            cfg.epochs = count_at(*it, "simulator.epochs");
        if (auto it = sim->find("seed"); it != sim->end())
            cfg.seed = count_at(*it, "simulator.seed");
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SpecError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<double> parse_beta_grid(const std::string& arg) {
    const auto first = arg.find(':');
    const auto second = arg.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw SpecError("--beta-grid: expected start:stop:count");
    const auto parse_double = [&](const std::string& s, const char* what) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw SpecError(std::string("--beta-grid: bad ") + what + " '" + s + "'");
        }
    };
    const double start = parse_double(arg.substr(0, first), "start");
    const double stop = parse_double(arg.substr(first + 1, second - first - 1), "stop");
    const std::string count_str = arg.substr(second + 1);
    std::uint64_t count = 0;
    const auto res =
        std::from_chars(count_str.data(), count_str.data() + count_str.size(), count);
    if (res.ec != std::errc() || res.ptr != count_str.data() + count_str.size() || count == 0)
        throw SpecError("--beta-grid: bad count '" + count_str + "'");
    return linear_grid(start, stop, count);
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v); // shortest round-trip
    std::string shortest(buf, res.ptr);

    int significant = 0;
    bool seen_nonzero = false;
    for (char c : shortest) {
        if (c == 'e' || c == 'E')
            break;
        if (c >= '0' && c <= '9') {
            if (c != '0')
                seen_nonzero = true;
            if (seen_nonzero)
                ++significant;
        }
    }
    if (significant <= 12)
        return shortest;
    res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

} // namespace aoivoi
