#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "qchaos/csv.hpp"
#include "qchaos/eigenstates.hpp"
#include "qchaos/error.hpp"
#include "qchaos/figures.hpp"
#include "qchaos/kernels.hpp"
#include "qchaos/models.hpp"
#include "qchaos/rotor.hpp"
#include "qchaos/spectra.hpp"
#include "qchaos/sweep.hpp"
#include "qchaos/theory.hpp"

namespace {

using namespace qchaos;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> cap_dim;
};

RunConfig load_with_overrides(const CommonFlags& f) {
    RunConfig cfg = load_config(f.config_path);
    if (f.seed) cfg.master_seed = *f.seed;
    if (f.workers) cfg.workers = *f.workers;
    if (f.out_dir) cfg.out_dir = *f.out_dir;
    if (f.cap_dim) {
        cfg.sweep.dim_cap = *f.cap_dim;
        int bits = 0;
        while ((std::size_t{1} << (bits + 1)) <= *f.cap_dim && bits < 62) ++bits;
        cfg.sweep.qubit_cap = bits;
    }
    return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", f.config_path, "config file path");
    if (needs_config) opt->required();
    cmd->add_option("--seed", f.seed, "override the master seed");
    cmd->add_option("--workers", f.workers, "worker thread count (0 = hardware)");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--cap-dim", f.cap_dim, "basis dimension cap");
}

void dump_matrix(const Hamiltonian& h, const std::string& path) {
    CsvWriter csv(path, {"row", "col", "value"});
    for (std::size_t i = 0; i < h.dim; ++i)
        csv.row({static_cast<double>(i), static_cast<double>(i), h.diagonal[i]});
    for (const auto& e : h.offdiag)
        csv.row({static_cast<double>(e.row), static_cast<double>(e.col), e.value});
}

void write_ldos(const RunConfig& cfg, const std::string& path) {
    const ModelConfig& mc = cfg.model;
    const double coupling = mc.model == "tbrim" ? mc.U : mc.coupling;
    const Hamiltonian space = analyzed_space(mc, cfg.sweep, coupling, mc.seed);
    const SpectralData sd = diagonalize(space, true);
    const auto refs = central_register_states(space, mc);
    const LdosFit fit = ldos_fit(sd, space.diagonal, refs);
    CsvWriter csv(path, {"E_offset", "density", "fit_density"});
    for (std::size_t b = 0; b < fit.centers.size(); ++b)
        csv.row({fit.centers[b], fit.density[b],
                 fit.ok ? fit.fit_density[b] : 0.0});
    if (fit.ok)
        std::printf("ldos: fitted width Gamma = %.6g (center %.4g, rms residual %.3g), %zu "
                    "reference states -> %s\n",
                    fit.width, fit.center, fit.residual, refs.size(), path.c_str());
    else
        std::printf("ldos: fit rejected (%s); binned density -> %s\n", fit.message.c_str(),
                    path.c_str());
}

int cmd_build(const CommonFlags& f, const std::string& dump_path,
              const std::string& ldos_path) {
    const RunConfig cfg = load_with_overrides(f);
    const ModelConfig& mc = cfg.model;
    if (mc.model == "layer3") {
        if (mc.state_in.size() != 3 || mc.state_out.size() != 3)
            throw ConfigError("layer3 needs state_in and state_out with 3 levels each");
        const auto result = effective_three_particle_coupling(
            mc.m, mc.Delta, mc.U, mc.seed,
            {mc.state_in[0], mc.state_in[1], mc.state_in[2]},
            {mc.state_out[0], mc.state_out[1], mc.state_out[2]});
        std::printf("layer3 coupling U3 = %.6g (excluded zero-detuning terms: %d)\n",
                    result.value, result.excluded_terms);
        std::printf("reference scale U^2/Delta = %.6g\n", mc.U * mc.U / mc.Delta);
        return 0;
    }
    const double coupling = mc.model == "tbrim" ? mc.U : mc.coupling;
    const Hamiltonian h = build_model(mc, coupling, mc.seed, cfg.sweep);
    std::printf("model %s: dim=%zu, offdiag entries=%zu\n", mc.model.c_str(), h.dim,
                h.offdiag.size());
    if (mc.model == "sgqc" || mc.model == "shard") {
        auto [even, odd] = parity_sectors(h);
        std::printf("parity sectors: even=%zu, odd=%zu; central band k=%d (dim %llu)\n",
                    even.dim, odd.dim, central_band(mc.n),
                    static_cast<unsigned long long>(binomial(mc.n, central_band(mc.n))));
        std::printf("predicted borders: J_c=%.6g, J_cs=%.6g, Delta_n=%.6g\n",
                    theory::predict_jc_sgqc(mc.model == "shard" ? 2 * mc.delta0 : mc.delta,
                                            mc.n)
                        .value,
                    theory::predict_jcs_sgqc(
                        mc.model == "shard" ? 2 * mc.delta0 : mc.delta, mc.n)
                        .value,
                    theory::multiqubit_spacing(mc.n, mc.delta0).value);
    } else if (mc.model == "tbrim") {
        const int particles = mc.particles > 0 ? mc.particles : mc.n;
        std::printf("K=%llu, B=%.6g, predicted U_c=%.6g\n",
                    static_cast<unsigned long long>(
                        count_directly_coupled(mc.m, particles)),
                    (2.0 * mc.m - 4.0) * mc.Delta,
                    theory::predict_uc_tbrim(mc.m, particles, mc.Delta).value);
    }
    if (!dump_path.empty()) {
        dump_matrix(h, dump_path);
        std::printf("matrix triplets written to %s\n", dump_path.c_str());
    }
    if (!ldos_path.empty()) write_ldos(cfg, ldos_path);
    return 0;
}

int cmd_sweep(const CommonFlags& f) {
    const RunConfig cfg = load_with_overrides(f);
    const SweepResult res = run_sweep(cfg);
    write_sweep_outputs(res, cfg.out_dir);
    for (const auto& p : res.points) {
        if (p.failed)
            std::printf("J=%-10.5g FAILED: %s\n", p.coupling, p.error.c_str());
        else
            std::printf("J=%-10.5g eta=%-8.4f +-%-7.4f mean_Sq=%-8.4f mean_xi=%-8.3f (N_S=%zu, N_D=%zu)\n",
                        p.coupling, p.eta, p.eta_stderr, p.mean_entropy, p.mean_ipr,
                        p.n_spacings, p.n_realizations);
    }
    if (res.j_c) std::printf("J_c  = %.6g\n", *res.j_c);
    if (res.j_cs) std::printf("J_cs = %.6g\n", *res.j_cs);
    std::printf("outputs in %s (%.1f s)\n", cfg.out_dir.c_str(), res.wall_seconds);
    if (res.too_many_failures)
        throw PartialSweepError("sweep: more than 20% of grid points failed");
    return 0;
}

int cmd_evolve(const CommonFlags& f) {
    const RunConfig cfg = load_with_overrides(f);
    const EvolveResult res = run_evolution(cfg);
    write_evolution_outputs(res, cfg.out_dir, cfg.evolve.per_state);
    std::printf("evolved %d initial states in a dim-%zu space; S saturates at %.4f bits\n",
                res.initial_states, res.analyzed_dimension, res.mean_entropy.back());
    std::printf("outputs in %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_rotor(const std::string& experiment, double K, double k, int steps, double perturbation,
              std::size_t orbits, int log2_size, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (experiment == "classical") {
        ClassicalEnsemble ens = make_line_ensemble(orbits, k, K / k);
        CsvWriter csv(out_dir + "/rotor_classical.csv", {"t", "E"});
        csv.row({0.0, ens.energy()});
        for (int t = 1; t <= steps; ++t) {
            classical_step(ens);
            csv.row({static_cast<double>(t), ens.energy()});
        }
        std::printf("classical run: E(%d) = %.6g (diffusion k^2 t/4 = %.6g)\n", steps,
                    ens.energy(), k * k * steps / 4.0);
    } else if (experiment == "classical-reversal") {
        const auto report = classical_reversal_experiment(K, k, steps, perturbation, orbits);
        CsvWriter csv(out_dir + "/rotor_classical.csv", {"t", "E"});
        for (std::size_t t = 0; t < report.energy_trace.size(); ++t)
            csv.row({static_cast<double>(t), report.energy_trace[t]});
        std::printf("reversal at t=%d with perturbation %.3g: divergence after %d steps, "
                    "E_final=%.6g vs E_rev=%.6g\n",
                    steps, perturbation, report.divergence_step, report.final_energy,
                    report.energy_at_reversal);
    } else if (experiment == "quantum") {
        QuantumRotor rotor = QuantumRotor::delta_at_zero(k, K / k, log2_size);
        CsvWriter csv(out_dir + "/rotor_quantum.csv", {"t", "E", "norm"});
        csv.row({0.0, rotor.energy(), rotor.norm_sq()});
        for (int t = 1; t <= steps; ++t) {
            rotor.step();
            csv.row({static_cast<double>(t), rotor.energy(), rotor.norm_sq()});
        }
        std::printf("quantum run: E(%d) = %.6g\n", steps, rotor.energy());
    } else if (experiment == "quantum-reversal") {
        const auto report = quantum_reversal_experiment(k, K / k, steps, log2_size);
        CsvWriter csv(out_dir + "/rotor_quantum.csv", {"t", "E", "norm"});
        for (std::size_t t = 0; t < report.energy_trace.size(); ++t)
            csv.row({static_cast<double>(t), report.energy_trace[t], report.norm_trace[t]});
        std::printf("quantum reversal at t=%d: return fidelity = %.12f\n", steps,
                    report.fidelity);
    } else {
        throw ConfigError("rotor: unknown experiment '" + experiment + "'");
    }
    std::printf("outputs in %s\n", out_dir.c_str());
    return 0;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void print_prediction(const theory::BorderPrediction& p, const std::string& inputs) {
    std::printf("%-22s %-34s %-14.8g %s\n", std::string(p.formula).c_str(), inputs.c_str(),
                p.value, p.order_of_magnitude ? "order-of-magnitude" : "calibrated");
}

int cmd_predict(int n, double delta0, double delta, double J, int m, int particles,
                double Delta, double U, double gamma_t, double omega) {
    std::printf("%-22s %-34s %-14s %s\n", "formula", "inputs", "value", "constant");
    if (n > 0 && delta > 0) {
        print_prediction(theory::predict_jc_sgqc(delta, n),
                         "delta=" + short_num(delta) + " n=" + std::to_string(n));
        print_prediction(theory::predict_jcs_sgqc(delta, n),
                         "delta=" + short_num(delta) + " n=" + std::to_string(n));
    }
    if (n > 0 && delta0 > 0)
        print_prediction(theory::multiqubit_spacing(n, delta0),
                         "n=" + std::to_string(n) + " delta0=" + short_num(delta0));
    if (n > 0 && delta > 0 && J > 0) {
        print_prediction(theory::predict_gamma(J, delta, n, theory::GammaRegime::sgqc_weak),
                         "J=" + short_num(J) + " delta=" + short_num(delta) +
                             " n=" + std::to_string(n));
        print_prediction(theory::predict_gamma(J, delta, n, theory::GammaRegime::sgqc_strong),
                         "J=" + short_num(J) + " n=" + std::to_string(n));
    }
    if (m > 1 && particles > 0 && particles < m && Delta > 0) {
        print_prediction(theory::predict_uc_tbrim(m, particles, Delta),
                         "m=" + std::to_string(m) + " n=" + std::to_string(particles) +
                             " Delta=" + short_num(Delta));
        if (U > 0) {
            const double rho_c = theory::tbrim_coupled_density(m, particles, Delta);
            print_prediction(theory::predict_gamma(U, rho_c, particles,
                                                   theory::GammaRegime::tbrim_golden_rule),
                             "U=" + short_num(U) + " rho_c=" + short_num(rho_c));
        }
    }
    if (Delta > 0 && U > 0) {
        const auto [de, tch] = theory::thermalization_border(Delta, U);
        print_prediction(de, "Delta=" + short_num(Delta) + " U=" + short_num(U));
        print_prediction(tch, "Delta=" + short_num(Delta) + " U=" + short_num(U));
    }
    if (gamma_t > 0 && omega > 0) {
        const auto [chi, phi] = theory::decoherence_scales(gamma_t, omega);
        print_prediction(chi, "Gamma_T=" + short_num(gamma_t));
        print_prediction(phi,
                         "Gamma_T=" + short_num(gamma_t) + " omega=" + short_num(omega));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum chaos border simulations for qubit registers and random"
                 " two-body Fermi systems"};
    app.require_subcommand(1);

    CommonFlags build_flags, sweep_flags, evolve_flags;
    std::string dump_path, ldos_path;

    auto* build = app.add_subcommand("build", "build a model and print its summary");
    add_common(build, build_flags);
    build->add_option("--dump", dump_path, "write matrix triplets (row,col,value) to CSV");
    build->add_option("--ldos", ldos_path,
                      "diagonalize and write the local density of states with its "
                      "Breit-Wigner fit to CSV");

    auto* sweep = app.add_subcommand("sweep", "disorder-averaged eta/S_q sweep over a grid");
    add_common(sweep, sweep_flags);

    auto* evolve = app.add_subcommand("evolve", "survival probability and entropy growth");
    add_common(evolve, evolve_flags);

    std::string experiment = "classical";
    double K = 5.0, kick = 20.0, perturbation = 1e-12;
    int steps = 150, log2_size = QuantumRotor::default_log2_size;
    std::size_t orbits = 1000;
    std::string rotor_out = "out";
    auto* rotor = app.add_subcommand("rotor", "standard map / kicked rotator experiments");
    rotor->add_option("--experiment", experiment,
                      "classical | classical-reversal | quantum | quantum-reversal");
    rotor->add_option("--K", K, "chaos parameter K = k*T");
    rotor->add_option("--k", kick, "kick strength");
    rotor->add_option("--steps", steps, "iterations (reversal happens after this many)");
    rotor->add_option("--perturbation", perturbation, "momentum inversion error");
    rotor->add_option("--orbits", orbits, "classical ensemble size");
    rotor->add_option("--log2-size", log2_size, "quantum momentum-basis size as a power of 2");
    rotor->add_option("--out-dir", rotor_out, "output directory");

    int pn = 0, pm = 0, pparticles = 0;
    double pdelta0 = 0, pdelta = 0, pJ = 0, pDelta = 0, pU = 0, pgamma = 0, pomega = 0;
    auto* predict = app.add_subcommand("predict", "closed-form border and time-scale table");
    predict->add_option("--n", pn, "qubit count");
    predict->add_option("--delta0", pdelta0, "mean one-qubit spacing");
    predict->add_option("--delta", pdelta, "detuning width");
    predict->add_option("--J", pJ, "inter-qubit coupling");
    predict->add_option("--m", pm, "orbital count");
    predict->add_option("--particles", pparticles, "fermion count");
    predict->add_option("--Delta", pDelta, "orbital spacing");
    predict->add_option("--U", pU, "two-body strength");
    predict->add_option("--Gamma-T", pgamma, "noise decay rate");
    predict->add_option("--omega", pomega, "noise energy jump");

    std::string figure_name, figure_out = "out";
    std::uint64_t figure_seed = 1;
    int figure_workers = 0;
    auto* figure = app.add_subcommand("figure", "run a named desk-scale figure recipe");
    figure->add_option("name", figure_name, "fig2..fig9")->required();
    figure->add_option("--out-dir", figure_out, "output directory");
    figure->add_option("--seed", figure_seed, "master seed");
    figure->add_option("--workers", figure_workers, "worker thread count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(build_flags, dump_path, ldos_path);
        if (sweep->parsed()) return cmd_sweep(sweep_flags);
        if (evolve->parsed()) return cmd_evolve(evolve_flags);
        if (rotor->parsed())
            return cmd_rotor(experiment, K, kick, steps, perturbation, orbits, log2_size,
                             rotor_out);
        if (predict->parsed())
            return cmd_predict(pn, pdelta0, pdelta, pJ, pm, pparticles, pDelta, pU, pgamma,
                               pomega);
        if (figure->parsed()) {
            run_figure(figure_name, figure_out, figure_seed, figure_workers);
            std::printf("figure %s written to %s\n", figure_name.c_str(), figure_out.c_str());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const PartialSweepError& e) {
        std::fprintf(stderr, "partial sweep failure: %s\n", e.what());
        return 4;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
