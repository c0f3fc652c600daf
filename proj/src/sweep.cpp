#include "qchaos/sweep.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "qchaos/csv.hpp"
#include "qchaos/eigenstates.hpp"
#include "qchaos/error.hpp"
#include "qchaos/kernels.hpp"
#include "qchaos/parallel.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/spectra.hpp"
#include "qchaos/theory.hpp"

namespace qchaos {

namespace {

constexpr std::uint64_t kBootstrapTag = 0xB007;
constexpr std::uint64_t kInitialStateTag = 0xE701;
constexpr int kBootstrapResamples = 200;
constexpr int kHistogramBins = 50;

bool is_qubit_model(const ModelConfig& mc) {
    return mc.model == "sgqc" || mc.model == "shard";
}

int qubit_count(const ModelConfig& mc) {
    if (mc.n < 1) throw ConfigError("model: qubit count n must be set");
    return mc.n;
}

SgqcParams qubit_params(const ModelConfig& mc, double coupling, std::uint64_t seed) {
    SgqcParams p;
    p.qubits = qubit_count(mc);
    p.delta0 = mc.delta0;
    p.delta = mc.model == "shard" ? 2.0 * mc.delta0 : mc.delta;
    p.coupling = coupling;
    p.seed = seed;
    if (mc.model == "shard") {
        p.lattice = default_lattice(p.qubits, Topology::star);
    } else if (mc.rows > 0 || mc.cols > 0) {
        if (mc.rows < 1 || mc.cols < 1 || mc.rows * mc.cols != p.qubits)
            throw ConfigError("model: rows*cols must equal n");
        p.lattice = build_lattice(mc.rows, mc.cols, Topology::torus_nearest_neighbor);
    } else {
        p.lattice = default_lattice(p.qubits);
    }
    return p;
}

int tbrim_particles(const ModelConfig& mc) {
    return mc.particles > 0 ? mc.particles : mc.n;  // "n" doubles as the fermion count
}

TbrimParams tbrim_params(const ModelConfig& mc, double coupling, std::uint64_t seed) {
    TbrimParams p;
    p.orbitals = mc.m;
    p.particles = tbrim_particles(mc);
    p.spacing = mc.Delta;
    p.strength = coupling;
    p.seed = seed;
    if (p.orbitals < 2 || p.particles < 1)
        throw ConfigError("model: tbrim needs m and a particle count (particles or n)");
    return p;
}

}  // namespace

Hamiltonian build_model(const ModelConfig& mc, double coupling, std::uint64_t seed,
                        const SweepSettings& caps) {
    if (is_qubit_model(mc)) return build_sgqc(qubit_params(mc, coupling, seed), caps.qubit_cap);
    if (mc.model == "tbrim") return build_tbrim(tbrim_params(mc, coupling, seed), caps.dim_cap);
    throw ConfigError("build_model: model '" + mc.model + "' has no matrix form");
}

Hamiltonian analyzed_space(const ModelConfig& mc, const SweepSettings& ss, double coupling,
                           std::uint64_t seed) {
    Hamiltonian full = build_model(mc, coupling, seed, ss);
    if (!is_qubit_model(mc)) return full;
    const int k = central_band(mc.n);
    if (ss.analysis == "band") return project_band(full, k);
    auto [even, odd] = parity_sectors(full);
    return (k % 2 == 0) ? std::move(even) : std::move(odd);
}

std::size_t analyzed_dim(const ModelConfig& mc, const SweepSettings& ss) {
    if (is_qubit_model(mc)) {
        const int n = qubit_count(mc);
        if (ss.analysis == "band")
            return static_cast<std::size_t>(binomial(n, central_band(n)));
        return std::size_t{1} << (n - 1);
    }
    if (mc.model == "tbrim")
        return static_cast<std::size_t>(binomial(mc.m, tbrim_particles(mc)));
    throw ConfigError("analyzed_dim: model '" + mc.model + "' has no matrix form");
}

namespace {

/// central half of the unperturbed energy span of the central band
std::pair<double, double> band_energy_window(const Hamiltonian& analyzed, int band_k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < analyzed.dim; ++i) {
        if (std::popcount(analyzed.labels[i]) != band_k) continue;
        lo = std::min(lo, analyzed.diagonal[i]);
        hi = std::max(hi, analyzed.diagonal[i]);
    }
    const double span = hi - lo;
    return {lo + 0.25 * span, hi - 0.25 * span};
}

}  // namespace

std::vector<std::size_t> central_selection(const Hamiltonian& analyzed,
                                           const ModelConfig& mc,
                                           const std::vector<double>& eigenvalues) {
    std::vector<std::size_t> sel;
    if (is_qubit_model(mc)) {
        const auto [lo, hi] = band_energy_window(analyzed, central_band(mc.n));
        for (std::size_t m = 0; m < eigenvalues.size(); ++m)
            if (eigenvalues[m] >= lo && eigenvalues[m] <= hi) sel.push_back(m);
    } else {
        const std::size_t n = eigenvalues.size();
        for (std::size_t m = n / 4; m < n - n / 4; ++m) sel.push_back(m);
    }
    if (sel.empty())
        for (std::size_t m = 0; m < eigenvalues.size(); ++m) sel.push_back(m);
    return sel;
}

std::vector<std::size_t> central_register_states(const Hamiltonian& analyzed,
                                                 const ModelConfig& mc) {
    std::vector<std::size_t> states;
    if (is_qubit_model(mc)) {
        const int k = central_band(mc.n);
        const auto [lo, hi] = band_energy_window(analyzed, k);
        for (std::size_t i = 0; i < analyzed.dim; ++i)
            if (std::popcount(analyzed.labels[i]) == k && analyzed.diagonal[i] >= lo &&
                analyzed.diagonal[i] <= hi)
                states.push_back(i);
        if (states.empty())
            for (std::size_t i = 0; i < analyzed.dim; ++i)
                if (std::popcount(analyzed.labels[i]) == k) states.push_back(i);
    } else {
        std::vector<std::size_t> order(analyzed.dim);
        for (std::size_t i = 0; i < analyzed.dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return analyzed.diagonal[a] < analyzed.diagonal[b];
        });
        const std::size_t n = order.size();
        states.assign(order.begin() + n / 4, order.begin() + (n - n / 4));
        std::sort(states.begin(), states.end());
    }
    return states;
}

namespace {

struct TaskOut {
    bool ok = false;
    std::string error;
    std::vector<double> spacings;
    std::size_t below = 0;
    double sum_entropy = 0.0, sum_ipr = 0.0;
    std::size_t n_states = 0;
    std::vector<SweepPointResult::StateRow> states;
};

struct Plan {
    std::size_t window_levels = 0;
    double window_fraction = 0.25;  // resolved so unfold hits window_levels exactly
    int halfwidth = 0;
    int realizations = 1;
};

Plan make_plan(const RunConfig& cfg) {
    Plan plan;
    const std::size_t dim = analyzed_dim(cfg.model, cfg.sweep);
    const auto want = static_cast<std::size_t>(
        std::llround(cfg.sweep.window_fraction * static_cast<double>(dim)));
    plan.window_levels = std::min(dim, std::max<std::size_t>(want, 4));
    if (plan.window_levels < 4)
        throw ConfigError("sweep: analyzed space too small (" + std::to_string(dim) +
                          " levels) for spacing statistics");
    plan.window_fraction = static_cast<double>(plan.window_levels) / static_cast<double>(dim);
    // unfold needs window >= 2*halfwidth + 2
    plan.halfwidth = std::min<int>(cfg.sweep.smoothing_halfwidth,
                                   static_cast<int>((plan.window_levels - 2) / 2));
    const std::size_t per_real = plan.window_levels - 1;
    plan.realizations = std::max(1, cfg.sweep.realizations);
    if (cfg.sweep.target_spacings) {
        const auto need = static_cast<int>(
            (*cfg.sweep.target_spacings + per_real - 1) / per_real);
        plan.realizations = std::max(plan.realizations, need);
    }
    return plan;
}

TaskOut run_task(const RunConfig& cfg, const Plan& plan, double coupling,
                 std::size_t point_index, std::size_t realization) {
    TaskOut out;
    try {
        const std::uint64_t seed =
            mix_seed(mix_seed(cfg.master_seed, point_index), realization);
        const Hamiltonian space = analyzed_space(cfg.model, cfg.sweep, coupling, seed);
        const SpectralData sd = diagonalize(space, true);

        SpacingSample sample = unfold(sd.eigenvalues, plan.window_fraction, plan.halfwidth);
        out.below = 0;
        for (double s : sample.spacings)
            if (s <= EtaResult::s0) ++out.below;

        const auto selection = central_selection(space, cfg.model, sd.eigenvalues);
        std::vector<double> w(sd.dim);
        const bool keep_rows = realization == 0;
        for (std::size_t m : selection) {
            kernels::squares(sd.vector(m), w);
            const double xi = 1.0 / kernels::sum_squares(w);
            const double sq = kernels::entropy_bits(w);
            out.sum_ipr += xi;
            out.sum_entropy += sq;
            if (keep_rows) out.states.push_back({m, sd.eigenvalues[m], xi, sq});
        }
        out.n_states = selection.size();
        out.spacings = std::move(sample.spacings);
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

double bootstrap_stderr(const std::vector<std::pair<std::size_t, std::size_t>>& counts,
                        std::uint64_t seed) {
    if (counts.size() < 2) return 0.0;
    Rng rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    int used = 0;
    for (int r = 0; r < kBootstrapResamples; ++r) {
        std::size_t below = 0, total = 0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            const auto& [b, t] = counts[rng.index(counts.size())];
            below += b;
            total += t;
        }
        if (total == 0) continue;
        const double eta = eta_from_counts(std::max<std::size_t>(below, 0),
                                           std::max<std::size_t>(total, 100))
                               .eta;
        sum += eta;
        sum_sq += eta * eta;
        ++used;
    }
    if (used < 2) return 0.0;
    const double mean = sum / used;
    const double var = std::max(0.0, sum_sq / used - mean * mean);
    return std::sqrt(var * used / (used - 1));
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    if (cfg.sweep.grid.empty()) throw ConfigError("sweep: empty coupling grid");
    for (std::size_t i = 1; i < cfg.sweep.grid.size(); ++i)
        if (cfg.sweep.grid[i] <= cfg.sweep.grid[i - 1])
            throw ConfigError("sweep: coupling grid must ascend");

    const Plan plan = make_plan(cfg);
    SweepResult result;
    result.config = cfg;
    result.resolved_realizations = plan.realizations;

    const std::size_t n_points = cfg.sweep.grid.size();
    const std::size_t n_real = static_cast<std::size_t>(plan.realizations);
    std::vector<TaskOut> slots(n_points * n_real);
    parallel_for(slots.size(), cfg.workers, [&](std::size_t task) {
        const std::size_t point = task / n_real;
        const std::size_t realization = task % n_real;
        slots[task] = run_task(cfg, plan, cfg.sweep.grid[point], point, realization);
    });

    std::size_t failed_points = 0;
    for (std::size_t point = 0; point < n_points; ++point) {
        SweepPointResult pr;
        pr.coupling = cfg.sweep.grid[point];
        double sum_entropy = 0.0, sum_ipr = 0.0;
        std::size_t n_states = 0, below = 0;
        for (std::size_t r = 0; r < n_real; ++r) {
            TaskOut& t = slots[point * n_real + r];
            if (!t.ok) {
                pr.failed = true;
                if (!pr.error.empty()) pr.error += "; ";
                pr.error += "realization " + std::to_string(r) + ": " + t.error;
                continue;
            }
            pr.realization_counts.emplace_back(t.below, t.spacings.size());
            below += t.below;
            pr.pooled_spacings.insert(pr.pooled_spacings.end(), t.spacings.begin(),
                                      t.spacings.end());
            sum_entropy += t.sum_entropy;
            sum_ipr += t.sum_ipr;
            n_states += t.n_states;
            ++pr.n_realizations;
            if (r == 0) pr.states = std::move(t.states);
        }
        pr.n_spacings = pr.pooled_spacings.size();
        if (pr.failed) {
            ++failed_points;
        } else {
            pr.eta = pr.n_spacings >= 100
                         ? eta_from_counts(below, pr.n_spacings).eta
                         : std::numeric_limits<double>::quiet_NaN();
            pr.eta_stderr = bootstrap_stderr(
                pr.realization_counts, mix_seed(mix_seed(cfg.master_seed, kBootstrapTag), point));
            pr.mean_entropy = n_states ? sum_entropy / static_cast<double>(n_states)
                                       : std::numeric_limits<double>::quiet_NaN();
            pr.mean_ipr = n_states ? sum_ipr / static_cast<double>(n_states)
                                   : std::numeric_limits<double>::quiet_NaN();
        }
        result.points.push_back(std::move(pr));
    }

    // crossings over the valid part of the curves
    std::vector<double> cs, etas, entropies;
    for (const auto& p : result.points) {
        if (p.failed) continue;
        cs.push_back(p.coupling);
        etas.push_back(p.eta);
        entropies.push_back(p.mean_entropy);
    }
    auto scan_down = [&](const std::vector<double>& y, double yc)
        -> std::optional<std::pair<std::size_t, std::size_t>> {
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (std::isnan(y[i])) continue;
            if (y[i] == yc) return std::make_pair(i, i);
            if (i + 1 < y.size() && !std::isnan(y[i + 1]) && y[i] > yc && y[i + 1] < yc)
                return std::make_pair(i, i + 1);
        }
        return std::nullopt;
    };
    auto scan_up = [&](const std::vector<double>& y, double yc)
        -> std::optional<std::pair<std::size_t, std::size_t>> {
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (std::isnan(y[i])) continue;
            if (y[i] == yc) return std::make_pair(i, i);
            if (i + 1 < y.size() && !std::isnan(y[i + 1]) && y[i] < yc && y[i + 1] > yc)
                return std::make_pair(i, i + 1);
        }
        return std::nullopt;
    };
    if (auto br = scan_down(etas, cfg.sweep.eta_c)) {
        const auto [i, j] = *br;
        result.j_c_bracket = {cs[i], cs[j]};
        result.j_c = i == j ? cs[i]
                            : cs[i] + (etas[i] - cfg.sweep.eta_c) / (etas[i] - etas[j]) *
                                          (cs[j] - cs[i]);
    }
    if (auto br = scan_up(entropies, 1.0)) {
        const auto [i, j] = *br;
        result.j_cs_bracket = {cs[i], cs[j]};
        result.j_cs = i == j ? cs[i]
                             : cs[i] + (1.0 - entropies[i]) / (entropies[j] - entropies[i]) *
                                           (cs[j] - cs[i]);
    }

    result.too_many_failures =
        5 * failed_points > n_points;  // > 20% of grid points failed
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

namespace {

nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["model"] = {{"model", cfg.model.model},   {"n", cfg.model.n},
                  {"rows", cfg.model.rows},     {"cols", cfg.model.cols},
                  {"delta0", cfg.model.delta0}, {"delta", cfg.model.delta},
                  {"J", cfg.model.coupling},    {"m", cfg.model.m},
                  {"Delta", cfg.model.Delta},   {"U", cfg.model.U},
                  {"particles", cfg.model.particles}, {"seed", cfg.model.seed}};
    j["sweep"] = {{"grid", cfg.sweep.grid},
                  {"realizations", cfg.sweep.realizations},
                  {"eta_c", cfg.sweep.eta_c},
                  {"window_fraction", cfg.sweep.window_fraction},
                  {"smoothing_halfwidth", cfg.sweep.smoothing_halfwidth},
                  {"analysis", cfg.sweep.analysis},
                  {"dim_cap", cfg.sweep.dim_cap},
                  {"qubit_cap", cfg.sweep.qubit_cap}};
    if (cfg.sweep.target_spacings) j["sweep"]["target_spacings"] = *cfg.sweep.target_spacings;
    j["run"] = {{"seed", cfg.master_seed},
                {"out_dir", cfg.out_dir},
                {"workers", cfg.workers},
                {"kernel_backend",
                 std::string(kernels::backend_name(kernels::active_backend()))}};
    return j;
}

}  // namespace

void write_sweep_outputs(const SweepResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> files;

    {
        CsvWriter curve(out_dir + "/eta_curve.csv",
                        {"coupling", "eta", "n_spacings", "n_realizations", "stderr"});
        for (const auto& p : result.points) {
            if (p.failed) continue;
            curve.row({p.coupling, p.eta, static_cast<double>(p.n_spacings),
                       static_cast<double>(p.n_realizations), p.eta_stderr});
        }
        files.push_back("eta_curve.csv");
    }
    {
        CsvWriter summary(out_dir + "/sweep_summary.csv",
                          {"coupling", "eta", "stderr", "mean_S_q", "mean_xi", "n_spacings",
                           "n_realizations"});
        for (const auto& p : result.points) {
            if (p.failed) continue;
            summary.row({p.coupling, p.eta, p.eta_stderr, p.mean_entropy, p.mean_ipr,
                         static_cast<double>(p.n_spacings),
                         static_cast<double>(p.n_realizations)});
        }
        files.push_back("sweep_summary.csv");
    }
    {
        CsvWriter states(out_dir + "/state_analysis.csv", {"J", "m", "E", "xi", "S_q"});
        for (const auto& p : result.points) {
            if (p.failed) continue;
            for (const auto& s : p.states)
                states.row({p.coupling, static_cast<double>(s.index), s.energy, s.xi,
                            s.entropy});
        }
        files.push_back("state_analysis.csv");
    }
    auto write_hist = [&](const SweepPointResult& p, const std::string& name) {
        SpacingSample sample;
        sample.spacings = p.pooled_spacings;
        const Histogram h = spacing_histogram(sample, kHistogramBins);
        CsvWriter hist(out_dir + "/" + name, {"s_center", "density", "count"});
        for (std::size_t b = 0; b < h.centers.size(); ++b)
            hist.row({h.centers[b], h.density[b], static_cast<double>(h.counts[b])});
        files.emplace_back(name);
    };
    for (std::size_t k = 0; k < result.points.size(); ++k) {
        const auto& p = result.points[k];
        if (p.failed || p.pooled_spacings.empty()) continue;
        char name[32];
        std::snprintf(name, sizeof name, "ps_hist_%03zu.csv", k);
        write_hist(p, name);
    }
    // canonical ps_hist.csv: the point nearest the eta border, else the first valid one
    {
        const SweepPointResult* chosen = nullptr;
        for (const auto& p : result.points) {
            if (p.failed || p.pooled_spacings.empty()) continue;
            if (!chosen ||
                (result.j_c && std::abs(p.coupling - *result.j_c) <
                                   std::abs(chosen->coupling - *result.j_c)))
                chosen = &p;
        }
        if (chosen) write_hist(*chosen, "ps_hist.csv");
    }

    nlohmann::json manifest;
    manifest["config"] = config_json(result.config);
    manifest["resolved_realizations"] = result.resolved_realizations;
    manifest["wall_seconds"] = result.wall_seconds;
    manifest["outputs"] = files;
    manifest["too_many_failures"] = result.too_many_failures;
    if (result.j_c) {
        manifest["j_c"] = *result.j_c;
        manifest["j_c_bracket"] = {result.j_c_bracket->first, result.j_c_bracket->second};
    }
    if (result.j_cs) {
        manifest["j_cs"] = *result.j_cs;
        manifest["j_cs_bracket"] = {result.j_cs_bracket->first, result.j_cs_bracket->second};
    }
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : result.points) {
        nlohmann::json jp = {{"coupling", p.coupling},
                             {"failed", p.failed},
                             {"n_spacings", p.n_spacings},
                             {"n_realizations", p.n_realizations}};
        if (p.failed) jp["error"] = p.error;
        points.push_back(jp);
    }
    manifest["points"] = points;
    std::ofstream mf(out_dir + "/manifest.json");
    mf << manifest.dump(2) << '\n';
}

std::vector<XiScalingPoint> xi_scaling(const RunConfig& cfg) {
    if (cfg.model.model != "tbrim")
        throw ConfigError("xi_scaling: only defined for the tbrim model");
    if (cfg.sweep.grid.empty()) throw ConfigError("xi_scaling: empty coupling grid");
    const double rho_c = theory::tbrim_coupled_density(cfg.model.m, tbrim_particles(cfg.model),
                                                       cfg.model.Delta);
    const int n_real = std::max(1, cfg.sweep.realizations);
    const std::size_t n_points = cfg.sweep.grid.size();

    struct Acc {
        double xi = 0.0, rho_n = 0.0;
        std::size_t states = 0;
    };
    std::vector<Acc> slots(n_points * n_real);
    parallel_for(slots.size(), cfg.workers, [&](std::size_t task) {
        const std::size_t point = task / n_real;
        const std::size_t realization = task % n_real;
        const std::uint64_t seed =
            mix_seed(mix_seed(cfg.master_seed, point), realization);
        const Hamiltonian h =
            analyzed_space(cfg.model, cfg.sweep, cfg.sweep.grid[point], seed);
        const SpectralData sd = diagonalize(h, true);
        const auto selection = central_selection(h, cfg.model, sd.eigenvalues);
        Acc acc;
        std::vector<double> w(sd.dim);
        for (std::size_t m : selection) {
            kernels::squares(sd.vector(m), w);
            acc.xi += 1.0 / kernels::sum_squares(w);
        }
        acc.states = selection.size();
        const double e_lo = sd.eigenvalues[selection.front()];
        const double e_hi = sd.eigenvalues[selection.back()];
        acc.rho_n = e_hi > e_lo
                        ? static_cast<double>(selection.size() - 1) / (e_hi - e_lo)
                        : 0.0;
        slots[task] = acc;
    });

    std::vector<XiScalingPoint> out(n_points);
    for (std::size_t point = 0; point < n_points; ++point) {
        XiScalingPoint& p = out[point];
        p.coupling = cfg.sweep.grid[point];
        double rho_n_sum = 0.0;
        for (int r = 0; r < n_real; ++r) {
            const Acc& a = slots[point * n_real + r];
            p.xi_mean += a.xi;
            p.n_states += a.states;
            rho_n_sum += a.rho_n;
        }
        p.xi_mean /= static_cast<double>(p.n_states);
        const double rho_n = rho_n_sum / n_real;
        p.x = p.coupling * p.coupling * rho_c * rho_n;
    }
    return out;
}

EvolveResult run_evolution(const RunConfig& cfg) {
    const ModelConfig& mc = cfg.model;
    const double coupling = is_qubit_model(mc) ? mc.coupling : mc.U;
    const Hamiltonian space = analyzed_space(mc, cfg.sweep, coupling, mc.seed);
    const SpectralData sd = diagonalize(space, true);

    // time grid from the predicted spreading width
    double gamma;
    if (is_qubit_model(mc)) {
        const double delta = mc.model == "shard" ? 2.0 * mc.delta0 : mc.delta;
        const auto regime = coupling < delta ? theory::GammaRegime::sgqc_weak
                                             : theory::GammaRegime::sgqc_strong;
        gamma = theory::predict_gamma(coupling, delta, mc.n, regime).value;
    } else {
        const int particles = tbrim_particles(mc);
        gamma = theory::predict_gamma(
                    coupling, theory::tbrim_coupled_density(mc.m, particles, mc.Delta),
                    particles, theory::GammaRegime::tbrim_golden_rule)
                    .value;
    }
    if (!(gamma > 0.0))
        throw ConfigError("evolve: coupling is zero, no spreading width to set the time grid");
    const std::vector<double> times = log_time_grid(gamma, cfg.evolve.points_per_decade);

    // initial register states drawn from the central band
    std::vector<std::size_t> candidates = central_register_states(space, mc);
    if (candidates.empty()) throw ConfigError("evolve: no central-band register states");
    Rng rng(mix_seed(cfg.master_seed, kInitialStateTag));
    for (std::size_t i = candidates.size(); i > 1; --i)
        std::swap(candidates[i - 1], candidates[rng.index(i)]);
    const std::size_t count =
        std::min<std::size_t>(std::max(cfg.evolve.initial_states, 1), candidates.size());
    candidates.resize(count);

    std::vector<EvolutionRecord> records(count);
    parallel_for(count, cfg.workers, [&](std::size_t s) {
        records[s] = survival_and_entropy(sd, candidates[s], times);
    });

    EvolveResult out;
    out.times = times;
    out.initial_states = static_cast<int>(count);
    out.analyzed_dimension = sd.dim;
    out.mean_survival.assign(times.size(), 0.0);
    out.mean_entropy.assign(times.size(), 0.0);
    // compensated summation keeps the average independent of worker count
    std::vector<double> comp_f(times.size(), 0.0), comp_s(times.size(), 0.0);
    for (const auto& rec : records)
        for (std::size_t k = 0; k < times.size(); ++k) {
            auto add = [](double& sum, double& comp, double v) {
                const double y = v - comp;
                const double t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            };
            add(out.mean_survival[k], comp_f[k], rec.survival[k]);
            add(out.mean_entropy[k], comp_s[k], rec.entropy[k]);
        }
    for (std::size_t k = 0; k < times.size(); ++k) {
        out.mean_survival[k] /= static_cast<double>(count);
        out.mean_entropy[k] /= static_cast<double>(count);
    }
    if (cfg.evolve.per_state) out.per_state = std::move(records);
    return out;
}

void write_evolution_outputs(const EvolveResult& result, const std::string& out_dir,
                             bool per_state) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    CsvWriter csv(out_dir + "/evolution.csv", {"t", "F_mean", "S_mean", "n_initial_states"});
    for (std::size_t k = 0; k < result.times.size(); ++k)
        csv.row({result.times[k], result.mean_survival[k], result.mean_entropy[k],
                 static_cast<double>(result.initial_states)});
    if (per_state && !result.per_state.empty()) {
        CsvWriter dump(out_dir + "/evolution_states.csv", {"t", "state", "F", "S"});
        for (const auto& rec : result.per_state)
            for (std::size_t k = 0; k < rec.times.size(); ++k)
                dump.row({rec.times[k], static_cast<double>(rec.initial_state),
                          rec.survival[k], rec.entropy[k]});
    }
}

}  // namespace qchaos
