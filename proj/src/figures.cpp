#include "qchaos/figures.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qchaos/csv.hpp"
#include "qchaos/eigenstates.hpp"
#include "qchaos/error.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/rotor.hpp"
#include "qchaos/sweep.hpp"
#include "qchaos/theory.hpp"

namespace qchaos {

namespace {

namespace fs = std::filesystem;

void write_manifest(const std::string& out_dir, nlohmann::json j, double wall_seconds) {
    j["wall_seconds"] = wall_seconds;
    std::ofstream mf(out_dir + "/manifest.json");
    mf << j.dump(2) << '\n';
}

std::vector<double> logspace(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int k = 0; k < count; ++k)
        g[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
    return g;
}

RunConfig tbrim_config(int m, int n, std::uint64_t seed, int workers) {
    RunConfig cfg;
    cfg.model.model = "tbrim";
    cfg.model.m = m;
    cfg.model.particles = n;
    cfg.model.Delta = 1.0;
    cfg.master_seed = seed;
    cfg.workers = workers;
    return cfg;
}

RunConfig sgqc_config(int n, double delta, std::uint64_t seed, int workers) {
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = n;
    cfg.model.delta0 = 1.0;
    cfg.model.delta = delta;
    cfg.master_seed = seed;
    cfg.workers = workers;
    return cfg;
}

void fig2(const std::string& out_dir, std::uint64_t seed, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Pair {
        int m, n;
    };
    const std::vector<Pair> pairs = {{10, 3}, {12, 3}, {12, 4}};
    CsvWriter summary(out_dir + "/fig2_summary.csv",
                      {"m", "n", "K", "B", "U_c", "U_c_over_B", "U_c_theory"});
    nlohmann::json meta;
    meta["figure"] = "fig2";
    meta["seed"] = seed;
    for (const auto& [m, n] : pairs) {
        RunConfig cfg = tbrim_config(m, n, mix_seed(seed, m * 100 + n), workers);
        cfg.sweep.grid = logspace(0.01, 0.6, 12);
        cfg.sweep.target_spacings = 10000;
        const SweepResult res = run_sweep(cfg);
        const std::string sub =
            out_dir + "/m" + std::to_string(m) + "_n" + std::to_string(n);
        write_sweep_outputs(res, sub);
        const double B = (2.0 * m - 4.0);
        const double K = static_cast<double>(count_directly_coupled(m, n));
        const double uc = res.j_c.value_or(std::numeric_limits<double>::quiet_NaN());
        summary.row({static_cast<double>(m), static_cast<double>(n), K, B, uc, uc / B,
                     theory::predict_uc_tbrim(m, n, 1.0).value});
    }
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void fig3(const std::string& out_dir, std::uint64_t seed, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = tbrim_config(12, 3, seed, workers);
    cfg.sweep.grid = {0.15, 0.2, 0.25, 0.3, 0.35};
    cfg.sweep.realizations = 10;
    const auto points = xi_scaling(cfg);
    CsvWriter csv(out_dir + "/xi_scaling.csv", {"U", "x", "xi_mean", "xi_over_x"});
    for (const auto& p : points) csv.row({p.coupling, p.x, p.xi_mean, p.xi_mean / p.x});
    nlohmann::json meta;
    meta["figure"] = "fig3";
    meta["seed"] = seed;
    meta["model"] = {{"m", 12}, {"particles", 3}, {"realizations", 10}};
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void fig4(const std::string& out_dir, std::uint64_t seed, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    CsvWriter summary(out_dir + "/fig4_summary.csv",
                      {"n", "J_c", "J_cs", "J_c_theory", "J_cs_theory", "Delta_n"});
    nlohmann::json meta;
    meta["figure"] = "fig4";
    meta["seed"] = seed;
    for (int n : {6, 9, 12}) {
        RunConfig cfg = sgqc_config(n, 1.0, mix_seed(seed, n), workers);
        cfg.sweep.grid = logspace(0.015, 1.2, 16);
        cfg.sweep.target_spacings = n <= 9 ? 10000 : 3000;
        const SweepResult res = run_sweep(cfg);
        write_sweep_outputs(res, out_dir + "/n" + std::to_string(n));
        summary.row({static_cast<double>(n),
                     res.j_c.value_or(std::numeric_limits<double>::quiet_NaN()),
                     res.j_cs.value_or(std::numeric_limits<double>::quiet_NaN()),
                     theory::predict_jc_sgqc(1.0, n).value,
                     theory::predict_jcs_sgqc(1.0, n).value,
                     theory::multiqubit_spacing(n, 1.0).value});
    }
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void fig5(const std::string& out_dir, std::uint64_t seed, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    const double delta = 0.25;
    CsvWriter summary(out_dir + "/fig5_summary.csv",
                      {"n", "J_c_over_delta", "J_cs_over_delta", "theory_Cq_over_n"});
    nlohmann::json meta;
    meta["figure"] = "fig5";
    meta["seed"] = seed;
    meta["delta"] = delta;
    meta["analysis"] = "band";
    for (int n : {6, 8, 10, 12}) {
        RunConfig cfg = sgqc_config(n, delta, mix_seed(seed, n), workers);
        cfg.sweep.analysis = "band";
        cfg.sweep.grid = logspace(0.015 * delta, 1.2 * delta, 14);
        cfg.sweep.target_spacings = n <= 10 ? 10000 : 3000;
        const SweepResult res = run_sweep(cfg);
        write_sweep_outputs(res, out_dir + "/n" + std::to_string(n));
        const double jc = res.j_c.value_or(std::numeric_limits<double>::quiet_NaN());
        const double jcs = res.j_cs.value_or(std::numeric_limits<double>::quiet_NaN());
        summary.row({static_cast<double>(n), jc / delta, jcs / delta, 3.3 / n});
    }
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void fig6(const std::string& out_dir, std::uint64_t seed, int workers) {
    (void)workers;
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 10;  // reduced from the reference scale
    SgqcParams p = sgqc_params(n, 1.0, 1.0, 0.0, seed);
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(0.05 * k);
    const MeltingMap map = melting_map(p, grid);
    CsvWriter csv(out_dir + "/melting_map.csv", {"J", "E", "S_q"});
    for (const auto& row : map.rows) csv.row({row.coupling, row.energy, row.entropy});
    nlohmann::json meta;
    meta["figure"] = "fig6";
    meta["seed"] = seed;
    meta["n"] = n;
    meta["delta"] = 1.0;
    meta["grid"] = grid;
    meta["failures"] = map.failures;
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void fig7(const std::string& out_dir, std::uint64_t seed, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    nlohmann::json meta;
    meta["figure"] = "fig7";
    meta["seed"] = seed;
    for (int n : {6, 9, 12}) {
        RunConfig cfg = sgqc_config(n, 1.0, mix_seed(seed, n), workers);
        cfg.model.coupling = 0.4;
        cfg.model.seed = mix_seed(seed, 1000 + n);
        cfg.evolve.initial_states = n >= 12 ? 20 : 50;
        const EvolveResult res = run_evolution(cfg);
        write_evolution_outputs(res, out_dir + "/n" + std::to_string(n), false);
    }
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void fig8(const std::string& out_dir, std::uint64_t seed, int workers) {
    (void)seed;
    (void)workers;
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = classical_reversal_experiment(5.0, 20.0, 150, 1e-12, 1000);
    CsvWriter csv(out_dir + "/rotor_classical.csv", {"t", "E"});
    for (std::size_t t = 0; t < report.energy_trace.size(); ++t)
        csv.row({static_cast<double>(t), report.energy_trace[t]});
    nlohmann::json meta;
    meta["figure"] = "fig8";
    meta["K"] = 5.0;
    meta["k"] = 20.0;
    meta["t_rev"] = 150;
    meta["perturbation"] = 1e-12;
    meta["orbits"] = 1000;
    meta["divergence_step"] = report.divergence_step;
    meta["energy_at_reversal"] = report.energy_at_reversal;
    meta["final_energy"] = report.final_energy;
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

void fig9(const std::string& out_dir, std::uint64_t seed, int workers) {
    (void)seed;
    (void)workers;
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = quantum_reversal_experiment(20.0, 0.25, 150);
    CsvWriter csv(out_dir + "/rotor_quantum.csv", {"t", "E", "norm"});
    for (std::size_t t = 0; t < report.energy_trace.size(); ++t)
        csv.row({static_cast<double>(t), report.energy_trace[t], report.norm_trace[t]});
    nlohmann::json meta;
    meta["figure"] = "fig9";
    meta["K"] = 5.0;
    meta["k"] = 20.0;
    meta["T"] = 0.25;
    meta["t_rev"] = 150;
    meta["log2_size"] = QuantumRotor::default_log2_size;
    meta["fidelity"] = report.fidelity;
    write_manifest(out_dir, meta,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

}  // namespace

std::vector<std::string> figure_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

void run_figure(const std::string& name, const std::string& out_dir,
                std::uint64_t master_seed, int workers) {
    fs::create_directories(out_dir);
    if (name == "fig2")
        fig2(out_dir, master_seed, workers);
    else if (name == "fig3")
        fig3(out_dir, master_seed, workers);
    else if (name == "fig4")
        fig4(out_dir, master_seed, workers);
    else if (name == "fig5")
        fig5(out_dir, master_seed, workers);
    else if (name == "fig6")
        fig6(out_dir, master_seed, workers);
    else if (name == "fig7")
        fig7(out_dir, master_seed, workers);
    else if (name == "fig8")
        fig8(out_dir, master_seed, workers);
    else if (name == "fig9")
        fig9(out_dir, master_seed, workers);
    else
        throw ConfigError("figure: unknown recipe '" + name + "'");
}

}  // namespace qchaos
