#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Flat key-value config files with [section] headers. Unknown sections, unknown
// keys, duplicate keys and malformed values are hard errors.

namespace qchaos {

struct ModelConfig {
    std::string model = "sgqc";  // sgqc | shard | tbrim | layer3
    int n = 0;                   // qubits
    int rows = 0, cols = 0;      // 0 -> factor n automatically
    double delta0 = 1.0;
    double delta = 1.0;
    double coupling = 0.0;       // J
    int m = 0;                   // orbitals
    double Delta = 1.0;
    double U = 0.0;
    int particles = 0;           // fermion count for tbrim
    std::uint64_t seed = 0;
    std::vector<int> state_in, state_out;  // layer3 states
};

struct SweepSettings {
    std::vector<double> grid;    // ascending couplings
    int realizations = 1;        // N_D floor; raised to meet target_spacings
    std::optional<std::size_t> target_spacings;  // N_S
    double eta_c = 0.3;
    double window_fraction = 0.25;
    int smoothing_halfwidth = 10;
    std::string analysis = "sector";  // sector | band (band projection H_P)
    std::size_t dim_cap = 20000;
    int qubit_cap = 20;
};

struct EvolveSettings {
    int initial_states = 50;
    int points_per_decade = 64;
    bool per_state = false;
};

struct RunConfig {
    ModelConfig model;
    SweepSettings sweep;
    EvolveSettings evolve;
    std::uint64_t master_seed = 0;
    std::string out_dir = "out";
    int workers = 0;  // 0 -> hardware concurrency
};

RunConfig parse_config(std::istream& in, const std::string& origin = "<stream>");
RunConfig load_config(const std::string& path);

/// "0.1 0.2 0.3", "linspace lo hi count" or "logspace lo hi count"
std::vector<double> parse_grid(const std::string& text);

}  // namespace qchaos
