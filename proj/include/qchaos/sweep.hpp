#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qchaos/config.hpp"
#include "qchaos/dynamics.hpp"
#include "qchaos/models.hpp"

// Disorder-averaged sweeps over a coupling grid: per (grid point, realization)
// the model is built with seed mix(mix(master, point), realization), the
// analyzed sector is diagonalized, spacings are unfolded and pooled, and
// eigenstate statistics are collected over the central band. Scheduling order
// never affects results.

namespace qchaos {

/// Full Hamiltonian for the configured model at a given coupling value.
Hamiltonian build_model(const ModelConfig& mc, double coupling, std::uint64_t seed,
                        const SweepSettings& caps);

/// The symmetry-reduced space the statistics run in: the parity sector holding
/// the central band (or the band projection when analysis = band) for qubit
/// models, the full basis for the TBRIM.
Hamiltonian analyzed_space(const ModelConfig& mc, const SweepSettings& ss, double coupling,
                           std::uint64_t seed);

/// Dimension of the analyzed space, computed without building anything.
std::size_t analyzed_dim(const ModelConfig& mc, const SweepSettings& ss);

/// Eigenstates over which S_q and xi are averaged: states with energy inside
/// the central half of the central band's unperturbed span for qubit models,
/// the middle half of the spectrum for the TBRIM.
std::vector<std::size_t> central_selection(const Hamiltonian& analyzed,
                                           const ModelConfig& mc,
                                           const std::vector<double>& eigenvalues);

/// Register states of the analyzed space suitable as initial states: central
/// band membership and energy inside the central half of the band span.
std::vector<std::size_t> central_register_states(const Hamiltonian& analyzed,
                                                 const ModelConfig& mc);

struct SweepPointResult {
    double coupling = 0.0;
    bool failed = false;
    std::string error;
    double eta = 0.0;          // NaN when fewer than 100 pooled spacings
    double eta_stderr = 0.0;
    double mean_entropy = 0.0;
    double mean_ipr = 0.0;
    std::size_t n_spacings = 0;
    std::size_t n_realizations = 0;
    std::vector<double> pooled_spacings;
    std::vector<std::pair<std::size_t, std::size_t>> realization_counts;  // (below s0, total)

    struct StateRow {
        std::size_t index;
        double energy, xi, entropy;
    };
    std::vector<StateRow> states;  // realization 0 only
};

struct SweepResult {
    RunConfig config;
    int resolved_realizations = 0;
    std::vector<SweepPointResult> points;
    std::optional<double> j_c, j_cs;
    std::optional<std::pair<double, double>> j_c_bracket, j_cs_bracket;
    bool too_many_failures = false;  // > 20% of grid points failed
    double wall_seconds = 0.0;
};

SweepResult run_sweep(const RunConfig& cfg);

/// eta_curve.csv, sweep_summary.csv, ps_hist_NNN.csv, state_analysis.csv and
/// manifest.json under out_dir.
void write_sweep_outputs(const SweepResult& result, const std::string& out_dir);

/// One point of the IPR-scaling measurement: mean xi over the central band and
/// the scaling variable x = U^2 rho_c rho_n (rho_c from the direct-transition
/// count, rho_n measured from the central spectral window).
struct XiScalingPoint {
    double coupling = 0.0;
    double xi_mean = 0.0;
    double x = 0.0;
    std::size_t n_states = 0;
};

std::vector<XiScalingPoint> xi_scaling(const RunConfig& cfg);

struct EvolveResult {
    std::vector<double> times;
    std::vector<double> mean_survival;
    std::vector<double> mean_entropy;
    int initial_states = 0;
    std::size_t analyzed_dimension = 0;
    std::vector<EvolutionRecord> per_state;  // filled only when requested
};

EvolveResult run_evolution(const RunConfig& cfg);
void write_evolution_outputs(const EvolveResult& result, const std::string& out_dir,
                             bool per_state);

}  // namespace qchaos
