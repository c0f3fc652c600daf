#include "qchaos/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qchaos/error.hpp"

namespace qchaos {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
    if (pos != v.size()) throw ConfigError("config: trailing junk in '" + key + "': " + v);
    return x;
}

long long parse_int(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    long long x;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
    if (pos != v.size()) throw ConfigError("config: trailing junk in '" + key + "': " + v);
    return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    std::size_t pos = 0;
    unsigned long long x;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: bad seed value for '" + key + "': " + v);
    }
    if (pos != v.size()) throw ConfigError("config: trailing junk in '" + key + "': " + v);
    return x;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(static_cast<int>(parse_int(tok, key)));
    return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::istringstream in(text);
    std::string first;
    if (!(in >> first)) throw ConfigError("config: empty grid");
    std::vector<double> grid;
    if (first == "linspace" || first == "logspace") {
        double lo, hi;
        int count;
        if (!(in >> lo >> hi >> count) || count < 2 || hi <= lo)
            throw ConfigError("config: grid needs '" + first + " lo hi count' with hi > lo");
        std::string extra;
        if (in >> extra) throw ConfigError("config: trailing junk in grid");
        if (first == "logspace" && lo <= 0.0)
            throw ConfigError("config: logspace grid needs lo > 0");
        grid.resize(count);
        for (int k = 0; k < count; ++k) {
            const double t = static_cast<double>(k) / (count - 1);
            grid[k] = first == "linspace" ? lo + t * (hi - lo)
                                          : lo * std::pow(hi / lo, t);
        }
        return grid;
    }
    std::istringstream all(text);
    std::string tok;
    while (all >> tok) grid.push_back(parse_double(tok, "grid"));
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw ConfigError("config: grid must ascend");
    return grid;
}

RunConfig parse_config(std::istream& in, const std::string& origin) {
    RunConfig cfg;
    std::string line, section;
    int line_no = 0;
    std::vector<std::string> seen;
    auto fail = [&](const std::string& msg) {
        throw ConfigError("config " + origin + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "sweep" && section != "evolve" &&
                section != "run")
                fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail("empty key or value");
        const std::string qualified = section + "." + key;
        for (const auto& s : seen)
            if (s == qualified) fail("duplicate key '" + key + "'");
        seen.push_back(qualified);

        if (section == "model") {
            if (key == "model") {
                if (value != "sgqc" && value != "shard" && value != "tbrim" &&
                    value != "layer3")
                    fail("unknown model '" + value + "'");
                cfg.model.model = value;
            } else if (key == "n")
                cfg.model.n = static_cast<int>(parse_int(value, key));
            else if (key == "rows")
                cfg.model.rows = static_cast<int>(parse_int(value, key));
            else if (key == "cols")
                cfg.model.cols = static_cast<int>(parse_int(value, key));
            else if (key == "delta0")
                cfg.model.delta0 = parse_double(value, key);
            else if (key == "delta")
                cfg.model.delta = parse_double(value, key);
            else if (key == "J")
                cfg.model.coupling = parse_double(value, key);
            else if (key == "m")
                cfg.model.m = static_cast<int>(parse_int(value, key));
            else if (key == "Delta")
                cfg.model.Delta = parse_double(value, key);
            else if (key == "U")
                cfg.model.U = parse_double(value, key);
            else if (key == "particles")
                cfg.model.particles = static_cast<int>(parse_int(value, key));
            else if (key == "seed")
                cfg.model.seed = parse_u64(value, key);
            else if (key == "state_in")
                cfg.model.state_in = parse_int_list(value, key);
            else if (key == "state_out")
                cfg.model.state_out = parse_int_list(value, key);
            else
                fail("unknown key '" + key + "' in [model]");
        } else if (section == "sweep") {
            if (key == "grid")
                cfg.sweep.grid = parse_grid(value);
            else if (key == "realizations")
                cfg.sweep.realizations = static_cast<int>(parse_int(value, key));
            else if (key == "target_spacings")
                cfg.sweep.target_spacings = static_cast<std::size_t>(parse_int(value, key));
            else if (key == "eta_c")
                cfg.sweep.eta_c = parse_double(value, key);
            else if (key == "window_fraction")
                cfg.sweep.window_fraction = parse_double(value, key);
            else if (key == "smoothing_halfwidth")
                cfg.sweep.smoothing_halfwidth = static_cast<int>(parse_int(value, key));
            else if (key == "analysis") {
                if (value != "sector" && value != "band") fail("analysis must be sector|band");
                cfg.sweep.analysis = value;
            } else if (key == "dim_cap")
                cfg.sweep.dim_cap = static_cast<std::size_t>(parse_int(value, key));
            else if (key == "qubit_cap")
                cfg.sweep.qubit_cap = static_cast<int>(parse_int(value, key));
            else
                fail("unknown key '" + key + "' in [sweep]");
        } else if (section == "evolve") {
            if (key == "initial_states")
                cfg.evolve.initial_states = static_cast<int>(parse_int(value, key));
            else if (key == "points_per_decade")
                cfg.evolve.points_per_decade = static_cast<int>(parse_int(value, key));
            else if (key == "per_state")
                cfg.evolve.per_state = parse_bool(value, key);
            else
                fail("unknown key '" + key + "' in [evolve]");
        } else if (section == "run") {
            if (key == "seed")
                cfg.master_seed = parse_u64(value, key);
            else if (key == "out_dir")
                cfg.out_dir = value;
            else if (key == "workers")
                cfg.workers = static_cast<int>(parse_int(value, key));
            else
                fail("unknown key '" + key + "' in [run]");
        } else {
            fail("key outside any section");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    return parse_config(in, path);
}

}  // namespace qchaos
