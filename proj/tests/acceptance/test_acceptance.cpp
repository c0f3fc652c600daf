#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "qchaos/dynamics.hpp"
#include "qchaos/eigenstates.hpp"
#include "qchaos/kernels.hpp"
#include "qchaos/models.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/rotor.hpp"
#include "qchaos/spectra.hpp"
#include "qchaos/sweep.hpp"
#include "qchaos/theory.hpp"

// Acceptance suite: one TEST_CASE per criterion, each printing a single
// pass/fail line. Expensive sweeps are cached and shared between criteria.

using namespace qchaos;

namespace {

void verdict(int id, bool pass, const std::string& detail) {
    std::printf("criterion %02d: %s  [%s]\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(pass, "criterion ", id, ": ", detail);
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- shared expensive computations -------------------------------------

RunConfig sgqc_sweep_config(int n, double delta) {
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = n;
    cfg.model.delta0 = 1.0;
    cfg.model.delta = delta;
    cfg.master_seed = mix_seed(20000623, static_cast<std::uint64_t>(n * 1000) +
                                              static_cast<std::uint64_t>(delta * 100));
    cfg.sweep.grid.clear();
    const int points = 16;
    for (int k = 0; k < points; ++k)
        cfg.sweep.grid.push_back(0.015 * delta *
                                 std::pow(80.0, static_cast<double>(k) / (points - 1)));
    cfg.sweep.target_spacings = n <= 9 ? 10000 : 3000;
    return cfg;
}

const SweepResult& sgqc_sweep(int n, double delta) {
    static std::map<std::pair<int, int>, SweepResult> cache;
    const auto key = std::make_pair(n, static_cast<int>(std::lround(delta * 100)));
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, run_sweep(sgqc_sweep_config(n, delta))).first;
    return it->second;
}

RunConfig tbrim_sweep_config(int m, int n) {
    RunConfig cfg;
    cfg.model.model = "tbrim";
    cfg.model.m = m;
    cfg.model.particles = n;
    cfg.model.Delta = 1.0;
    cfg.master_seed = mix_seed(991, static_cast<std::uint64_t>(m * 10 + n));
    const int points = 12;
    for (int k = 0; k < points; ++k)
        cfg.sweep.grid.push_back(0.01 *
                                 std::pow(60.0, static_cast<double>(k) / (points - 1)));
    cfg.sweep.target_spacings = 5000;
    return cfg;
}

const SweepResult& tbrim_sweep(int m, int n) {
    static std::map<std::pair<int, int>, SweepResult> cache;
    const auto key = std::make_pair(m, n);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, run_sweep(tbrim_sweep_config(m, n))).first;
    return it->second;
}

Hamiltonian gaussian_symmetric(std::size_t dim, std::uint64_t seed) {
    Hamiltonian h;
    h.dim = dim;
    h.labels.resize(dim);
    h.diagonal.resize(dim);
    Rng rng(seed);
    auto gauss = [&rng] {
        const double u1 = std::max(rng.uniform01(), 1e-300);
        const double u2 = rng.uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    for (std::size_t i = 0; i < dim; ++i) {
        h.labels[i] = i;
        h.diagonal[i] = std::sqrt(2.0) * gauss();
    }
    h.offdiag.reserve(dim * (dim - 1) / 2);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            h.offdiag.push_back(
                {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), gauss()});
    return h;
}

}  // namespace

TEST_CASE("criterion 01: eta calibration on analytic spacing laws") {
    Rng rng(20000616);
    std::vector<double> poisson(100000), wigner(100000);
    for (auto& s : poisson) s = -std::log(1.0 - rng.uniform01());
    for (auto& s : wigner) s = std::sqrt(-4.0 * std::log(1.0 - rng.uniform01()) / M_PI);
    const double eta_p = eta_statistic(poisson).eta;
    const double eta_w = eta_statistic(wigner).eta;
    const bool pass = std::abs(eta_p - 1.0) <= 0.05 && std::abs(eta_w) <= 0.05;
    verdict(1, pass, fmt("eta(Poisson)=%.4f (want 1.00+-0.05), eta(Wigner)=%.4f (want 0.00+-0.05)", eta_p, eta_w));
}

TEST_CASE("criterion 02: random-matrix limit of the eta statistic") {
    const Hamiltonian h = gaussian_symmetric(1000, 42);
    const SpectralData sd = diagonalize(h, false);
    const SpacingSample sample = unfold(sd.eigenvalues, 0.5, 10);
    const double eta = eta_statistic(sample).eta;
    verdict(2, std::abs(eta) <= 0.07, fmt("eta(GOE 1000)=%.4f (want 0.00+-0.07)", eta));
}

TEST_CASE("criterion 03: register-model chaos border scales as 3.16/n") {
    std::vector<double> measured;
    std::string detail;
    bool pass = true;
    for (int n : {6, 9, 12}) {
        const SweepResult& res = sgqc_sweep(n, 1.0);
        if (!res.j_c) {
            pass = false;
            detail += fmt("n=%d: no crossing; ", n);
            measured.push_back(0);
            continue;
        }
        const double jc = *res.j_c;
        const double theory = 3.16 / n;
        measured.push_back(jc);
        const bool in_band = jc >= 0.65 * theory && jc <= 1.35 * theory;
        pass = pass && in_band;
        detail += fmt("J_c(%d)=%.3f (3.16/n=%.3f, ratio %.2f); ", n, jc, theory, jc / theory);
    }
    const bool decreasing =
        measured.size() == 3 && measured[0] > measured[1] && measured[1] > measured[2];
    pass = pass && decreasing;
    verdict(3, pass, detail + (decreasing ? "strictly decreasing" : "NOT decreasing"));
}

TEST_CASE("criterion 04: entropy border J_cs = 0.41/n and the J_cs/J_c ratio") {
    bool pass = true;
    std::string detail;
    for (int n : {6, 9, 12}) {
        const SweepResult& res = sgqc_sweep(n, 1.0);
        if (!res.j_c || !res.j_cs) {
            pass = false;
            detail += fmt("n=%d: missing crossing; ", n);
            continue;
        }
        const double jcs = *res.j_cs;
        const double theory = 0.41 / n;
        const double ratio = jcs / *res.j_c;
        const bool jcs_ok = jcs >= 0.5 * theory && jcs <= 2.0 * theory;
        const bool ratio_ok = ratio >= 0.065 && ratio <= 0.26;
        pass = pass && jcs_ok && ratio_ok;
        detail += fmt("J_cs(%d)=%.4f (0.41/n=%.4f), J_cs/J_c=%.3f; ", n, jcs, theory, ratio);
    }
    verdict(4, pass, detail);
}

TEST_CASE("criterion 05: J_cs scales linearly with the detuning width") {
    std::vector<double> log_delta, log_jcs;
    bool have_all = true;
    std::string detail;
    for (double delta : {0.25, 0.5, 1.0}) {
        const SweepResult& res = sgqc_sweep(6, delta);
        if (!res.j_cs) {
            have_all = false;
            detail += fmt("delta=%.2f: no S_q crossing; ", delta);
            continue;
        }
        log_delta.push_back(std::log(delta));
        log_jcs.push_back(std::log(*res.j_cs));
        detail += fmt("J_cs(delta=%.2f)=%.4f; ", delta, *res.j_cs);
    }
    double slope = 0.0;
    if (have_all && log_delta.size() == 3) slope = lsq_slope(log_delta, log_jcs);
    const bool pass = have_all && std::abs(slope - 1.0) <= 0.25;
    verdict(5, pass, detail + fmt("slope=%.3f (want 1.00+-0.25)", slope));
}

TEST_CASE("criterion 06: TBRIM chaos border follows 0.58 B/K") {
    bool pass = true;
    std::string detail;
    for (const auto& [m, n] : std::vector<std::pair<int, int>>{{10, 3}, {12, 3}, {12, 4}}) {
        const SweepResult& res = tbrim_sweep(m, n);
        if (!res.j_c) {
            pass = false;
            detail += fmt("(%d,%d): no crossing; ", m, n);
            continue;
        }
        const double uc = *res.j_c;
        const double theory = theory::predict_uc_tbrim(m, n, 1.0).value;
        const bool ok = uc >= 0.5 * theory && uc <= 2.0 * theory;
        pass = pass && ok;
        detail += fmt("U_c(%d,%d)=%.4f (theory %.4f, ratio %.2f); ", m, n, uc, theory,
                      uc / theory);
    }
    verdict(6, pass, detail);
}

TEST_CASE("criterion 07: IPR follows xi = c U^2 rho_c rho_n with c in [1,4]") {
    RunConfig cfg;
    cfg.model.model = "tbrim";
    cfg.model.m = 12;
    cfg.model.particles = 3;
    cfg.model.Delta = 1.0;
    cfg.master_seed = 314159;
    cfg.sweep.grid = {0.15, 0.2, 0.25, 0.3, 0.35};
    cfg.sweep.realizations = 8;
    const auto pts = xi_scaling(cfg);
    // least squares through the origin
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : pts) {
        sxy += p.x * p.xi_mean;
        sxx += p.x * p.x;
    }
    const double coeff = sxy / sxx;
    verdict(7, coeff >= 1.0 && coeff <= 4.0,
            fmt("fitted coefficient %.2f over %zu chaotic points (want within [1,4])",
                coeff, pts.size()));
}

TEST_CASE("criterion 08: Breit-Wigner width matches the golden rule within x2") {
    const int m = 12, n = 3;
    const double u = 0.25;
    std::vector<double> offsets, weights;
    RunConfig cfg;
    cfg.model.model = "tbrim";
    cfg.model.m = m;
    cfg.model.particles = n;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        TbrimParams p{.orbitals = m, .particles = n, .spacing = 1.0, .strength = u,
                      .seed = mix_seed(777, seed)};
        const Hamiltonian h = build_tbrim(p);
        const SpectralData sd = diagonalize(h);
        const auto refs = central_register_states(h, cfg.model);
        for (std::size_t i : refs)
            for (std::size_t mm = 0; mm < sd.dim; ++mm) {
                offsets.push_back(sd.eigenvalues[mm] - h.diagonal[i]);
                const double amp = sd.component(i, mm);
                weights.push_back(amp * amp);
            }
    }
    const LdosFit fit = ldos_fit_samples(offsets, weights, 101);
    const double theory =
        theory::predict_gamma(u, theory::tbrim_coupled_density(m, n, 1.0), n,
                              theory::GammaRegime::tbrim_golden_rule)
            .value;
    const bool pass = fit.ok && fit.width >= 0.5 * theory && fit.width <= 2.0 * theory;
    verdict(8, pass,
            fmt("fitted Gamma=%.3f vs 2 pi U^2 rho_c / 3 = %.3f (ratio %.2f, fit %s)",
                fit.width, theory, fit.width / theory, fit.ok ? "ok" : "rejected"));
}

TEST_CASE("criterion 09: chaotic time scale scales as 1/J^2") {
    const int n = 9;
    std::vector<double> log_j, log_tau;
    std::string detail;
    for (double j : {0.38, 0.48, 0.6, 0.75}) {
        const double gamma_pred =
            theory::predict_gamma(j, 1.0, n, theory::GammaRegime::sgqc_weak).value;
        const std::vector<double> times = log_time_grid(gamma_pred, 32);
        std::vector<double> mean_f(times.size(), 0.0);
        int pooled_states = 0;
        for (std::uint64_t real = 0; real < 6; ++real) {
            RunConfig cfg;
            cfg.model.model = "sgqc";
            cfg.model.n = n;
            cfg.model.delta = 1.0;
            const Hamiltonian space =
                analyzed_space(cfg.model, cfg.sweep, j, mix_seed(606, real));
            const SpectralData sd = diagonalize(space);
            auto states = central_register_states(space, cfg.model);
            Rng rng(mix_seed(607, real));
            for (std::size_t i = states.size(); i > 1; --i)
                std::swap(states[i - 1], states[rng.index(i)]);
            states.resize(std::min<std::size_t>(states.size(), 20));
            for (std::size_t i0 : states) {
                const EvolutionRecord rec = survival_and_entropy(sd, i0, times);
                for (std::size_t k = 0; k < times.size(); ++k) mean_f[k] += rec.survival[k];
                ++pooled_states;
            }
        }
        for (auto& f : mean_f) f /= pooled_states;
        const double tau = extract_tau_chi(times, mean_f);
        log_j.push_back(std::log(j));
        log_tau.push_back(std::log(tau));
        detail += fmt("tau(J=%.2f)=%.3f; ", j, tau);
    }
    const double slope = lsq_slope(log_j, log_tau);
    verdict(9, std::abs(slope + 2.0) <= 0.3,
            detail + fmt("slope=%.2f (want -2.00+-0.30)", slope));
}

TEST_CASE("criterion 10: entropy growth saturates and grows with n") {
    auto saturation = [](const EvolveResult& res) {
        const std::size_t k0 = res.times.size() * 3 / 4;
        double s = 0.0;
        for (std::size_t k = k0; k < res.times.size(); ++k) s += res.mean_entropy[k];
        return s / static_cast<double>(res.times.size() - k0);
    };
    std::map<int, EvolveResult> runs;
    bool basics = true;
    std::string detail;
    for (int n : {9, 12}) {
        RunConfig cfg;
        cfg.model.model = "sgqc";
        cfg.model.n = n;
        cfg.model.delta = 1.0;
        cfg.model.coupling = 0.4;  // J = 0.4 delta, above the border
        cfg.model.seed = mix_seed(808, n);
        cfg.master_seed = mix_seed(809, n);
        cfg.evolve.initial_states = 20;
        cfg.evolve.points_per_decade = 24;
        runs.emplace(n, run_evolution(cfg));
        const EvolveResult& res = runs.at(n);
        const double bound = std::log2(static_cast<double>(res.analyzed_dimension));
        basics = basics && std::abs(res.mean_entropy.front()) < 1e-9;
        for (double s : res.mean_entropy) basics = basics && s <= bound + 1e-9;
        // saturation: the last decade is flat compared to the growth phase
        const double sat = saturation(res);
        const double mid = res.mean_entropy[res.times.size() / 2];
        basics = basics && sat > 0.5 && mid > 0.2 * sat;
        detail += fmt("S_sat(n=%d)=%.2f (bound %.2f); ", n, sat, bound);
    }
    const bool ordered = saturation(runs.at(12)) > saturation(runs.at(9));
    verdict(10, basics && ordered,
            detail + (ordered ? "S_sat(12) > S_sat(9)" : "ordering violated"));
}

TEST_CASE("criterion 11: melting map brightness and exact J=0 column") {
    SgqcParams base = sgqc_params(12, 1.0, 1.0, 0.0, 5);
    const std::vector<double> grid = {0.0, 0.5};
    const MeltingMap map = melting_map(base, grid);
    bool zero_exact = true;
    double e_lo = 0, e_hi = 0;
    for (const auto& row : map.rows) {
        if (row.coupling == 0.0) {
            zero_exact = zero_exact && row.entropy == 0.0;
            e_lo = std::min(e_lo, row.energy);
            e_hi = std::max(e_hi, row.energy);
        }
    }
    // brightest central-band states at J = 0.5 delta0
    const double mid_lo = e_lo + 0.375 * (e_hi - e_lo);
    const double mid_hi = e_hi - 0.375 * (e_hi - e_lo);
    double max_sq = 0.0;
    for (const auto& row : map.rows)
        if (row.coupling == 0.5 && row.energy >= mid_lo && row.energy <= mid_hi)
            max_sq = std::max(max_sq, row.entropy);
    const bool pass = map.failures.empty() && zero_exact && max_sq >= 9.0 && max_sq <= 12.0;
    verdict(11, pass,
            fmt("max central-band S_q at J=0.5 is %.2f (want in [9,12]); J=0 column %s",
                max_sq, zero_exact ? "exactly zero" : "NOT zero"));
}

TEST_CASE("criterion 12: classical diffusion matches E = k^2 t / 4") {
    ClassicalEnsemble ens = make_line_ensemble(1000, 20.0, 0.25);
    double ratio_sum = 0.0;
    int ratio_count = 0;
    for (int t = 1; t <= 150; ++t) {
        classical_step(ens);
        if (t >= 50) {
            ratio_sum += ens.energy() / (100.0 * t);
            ++ratio_count;
        }
    }
    const double mean_ratio = ratio_sum / ratio_count;
    verdict(12, mean_ratio >= 0.8 && mean_ratio <= 1.2,
            fmt("mean E/(k^2 t/4) over t in [50,150] = %.3f (want in [0.8,1.2])", mean_ratio));
}

TEST_CASE("criterion 13: classical reversal is destroyed after ~20 steps") {
    const auto report = classical_reversal_experiment(5.0, 20.0, 150, 1e-12, 1000);
    verdict(13, report.divergence_step >= 15 && report.divergence_step <= 35,
            fmt("median orbit leaves the retraced path after %d steps (want in [15,35])",
                report.divergence_step));
}

TEST_CASE("criterion 14: quantum evolution is perfectly reversible") {
    const auto report = quantum_reversal_experiment(20.0, 0.25, 150);
    double worst_drift = 0.0;
    for (std::size_t t = 1; t < report.norm_trace.size(); ++t)
        worst_drift = std::max(worst_drift,
                               std::abs(report.norm_trace[t] - report.norm_trace[t - 1]));
    const bool pass = report.fidelity > 1.0 - 1e-8 && worst_drift < 1e-13;
    verdict(14, pass,
            fmt("return fidelity 1-%.2e (want >1-1e-8), worst per-step norm drift %.2e "
                "(want <1e-13)",
                1.0 - report.fidelity, worst_drift));
}

TEST_CASE("criterion 15: structural property suite") {
    bool pass = true;
    std::string detail;

    {  // exact symmetry of constructed matrices
        const Hamiltonian a = build_sgqc(sgqc_params(6, 1.0, 1.0, 0.5, 1));
        const Hamiltonian b = build_tbrim(
            {.orbitals = 8, .particles = 3, .spacing = 1.0, .strength = 0.4, .seed = 2});
        for (const Hamiltonian* h : {&a, &b}) {
            const auto dense = h->dense();
            for (std::size_t i = 0; i < h->dim && pass; ++i)
                for (std::size_t j = 0; j < h->dim; ++j)
                    if (dense[i * h->dim + j] != dense[j * h->dim + i]) {
                        pass = false;
                        detail += "symmetry violated; ";
                        break;
                    }
        }
    }
    {  // sector dimensions
        const Hamiltonian h = build_sgqc(sgqc_params(7, 1.0, 0.8, 0.3, 3));
        auto [even, odd] = parity_sectors(h);
        std::size_t bands = 0;
        for (int k = 0; k <= 7; ++k) bands += project_band(h, k).dim;
        if (even.dim + odd.dim != h.dim || bands != h.dim) {
            pass = false;
            detail += "sector dims do not sum to 2^n; ";
        }
    }
    {  // overlap normalization and participation bounds
        const Hamiltonian h = build_sgqc(sgqc_params(6, 1.0, 1.0, 0.45, 4));
        auto [even, odd] = parity_sectors(h);
        const SpectralData sd = diagonalize(even);
        for (std::size_t m = 0; m < sd.dim; ++m) {
            const auto w = overlaps(sd, m);
            const double sum = kernels::sum(w);
            const double xi = ipr(w);
            const double sq = entropy_sq(w);
            if (std::abs(sum - 1.0) > 1e-9 || xi < 1.0 - 1e-9 ||
                xi > sd.dim * (1 + 1e-9) || sq < -1e-12 ||
                sq > std::log2(static_cast<double>(sd.dim)) + 1e-9 ||
                xi > std::pow(2.0, sq) * (1 + 1e-9)) {
                pass = false;
                detail += fmt("state %zu breaks participation bounds; ", m);
                break;
            }
        }
    }
    {  // K formula against brute-force enumeration for every m <= 8
        for (int m = 2; m <= 8 && pass; ++m)
            for (int n = 1; n < m; ++n) {
                std::uint64_t reachable = 0;
                std::uint64_t ref = (std::uint64_t{1} << n) - 1;
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
                    if (std::popcount(mask) == n && std::popcount(mask ^ ref) <= 4)
                        ++reachable;
                if (count_directly_coupled(m, n) != reachable) {
                    pass = false;
                    detail += fmt("K(%d,%d) mismatch; ", m, n);
                    break;
                }
            }
    }
    {  // scheduling-independent sweep determinism
        RunConfig cfg;
        cfg.model.model = "sgqc";
        cfg.model.n = 5;
        cfg.model.delta = 1.0;
        cfg.master_seed = 5;
        cfg.sweep.grid = {0.2, 0.6};
        cfg.sweep.realizations = 4;
        cfg.workers = 1;
        const SweepResult serial = run_sweep(cfg);
        cfg.workers = 4;
        const SweepResult parallel = run_sweep(cfg);
        for (std::size_t p = 0; p < serial.points.size(); ++p) {
            if (serial.points[p].pooled_spacings != parallel.points[p].pooled_spacings ||
                serial.points[p].mean_entropy != parallel.points[p].mean_entropy) {
                pass = false;
                detail += "worker count changed sweep results; ";
                break;
            }
        }
    }
    verdict(15, pass, pass ? "symmetry, sectors, participation bounds, K enumeration, "
                             "scheduling independence all hold"
                           : detail);
}
