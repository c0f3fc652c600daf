#include <doctest.h>

#include <algorithm>
#include <bit>

#include <json.hpp>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qchaos/error.hpp"
#include "qchaos/sweep.hpp"

using namespace qchaos;

namespace {

RunConfig small_sgqc_sweep() {
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = 5;
    cfg.model.delta0 = 1.0;
    cfg.model.delta = 1.0;
    cfg.master_seed = 11;
    cfg.sweep.grid = {0.1, 0.4, 0.8};
    cfg.sweep.realizations = 3;
    return cfg;
}

bool same_points(const SweepResult& a, const SweepResult& b) {
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        const auto& p = a.points[i];
        const auto& q = b.points[i];
        if (p.n_spacings != q.n_spacings || p.n_realizations != q.n_realizations)
            return false;
        if (std::memcmp(&p.mean_entropy, &q.mean_entropy, sizeof(double)) != 0) return false;
        if (std::memcmp(&p.mean_ipr, &q.mean_ipr, sizeof(double)) != 0) return false;
        if (std::memcmp(&p.eta, &q.eta, sizeof(double)) != 0) return false;
        if (p.pooled_spacings.size() != q.pooled_spacings.size()) return false;
        for (std::size_t k = 0; k < p.pooled_spacings.size(); ++k)
            if (p.pooled_spacings[k] != q.pooled_spacings[k]) return false;
    }
    return true;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("run_sweep: rerun with identical config is bit-identical") {
    const RunConfig cfg = small_sgqc_sweep();
    const SweepResult a = run_sweep(cfg);
    const SweepResult b = run_sweep(cfg);
    CHECK(same_points(a, b));
}

TEST_CASE("run_sweep: results independent of worker count") {
    RunConfig cfg = small_sgqc_sweep();
    cfg.workers = 1;
    const SweepResult serial = run_sweep(cfg);
    cfg.workers = 3;
    const SweepResult parallel = run_sweep(cfg);
    CHECK(same_points(serial, parallel));

    namespace fs = std::filesystem;
    const auto dir1 = fs::temp_directory_path() / "qchaos_sweep_w1";
    const auto dir2 = fs::temp_directory_path() / "qchaos_sweep_w3";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    write_sweep_outputs(serial, dir1.string());
    write_sweep_outputs(parallel, dir2.string());
    for (const char* name : {"eta_curve.csv", "sweep_summary.csv", "state_analysis.csv"})
        CHECK(slurp((dir1 / name).string()) == slurp((dir2 / name).string()));
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("run_sweep: different master seed changes the data") {
    RunConfig cfg = small_sgqc_sweep();
    const SweepResult a = run_sweep(cfg);
    cfg.master_seed = 12;
    const SweepResult b = run_sweep(cfg);
    CHECK_FALSE(same_points(a, b));
}

TEST_CASE("run_sweep: single point, single realization emits one row") {
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = 4;
    cfg.model.delta = 1.0;
    cfg.master_seed = 3;
    cfg.sweep.grid = {0.2};
    cfg.sweep.realizations = 1;
    const SweepResult res = run_sweep(cfg);
    REQUIRE(res.points.size() == 1);
    CHECK_FALSE(res.points[0].failed);
    CHECK(res.points[0].n_realizations == 1);
    // 4-level window of an 8-level sector: too few spacings for eta -> nan
    CHECK(std::isnan(res.points[0].eta));
    CHECK(res.points[0].mean_entropy >= 0.0);
}

TEST_CASE("run_sweep: target_spacings raises the realization count") {
    RunConfig cfg = small_sgqc_sweep();
    // sector dim 16 -> window floor of 4 levels -> 3 spacings per realization
    cfg.sweep.target_spacings = 100;
    const SweepResult res = run_sweep(cfg);
    CHECK(res.resolved_realizations == 34);  // ceil(100/3)
    CHECK(res.points[0].n_spacings >= 100);
    CHECK_FALSE(std::isnan(res.points[0].eta));
}

TEST_CASE("run_sweep: eta decreases from near 1 toward 0 across the border") {
    // n = 6 with a grid spanning both sides of J_c ~ 0.53
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = 6;
    cfg.model.delta = 1.0;
    cfg.master_seed = 5;
    cfg.sweep.grid = {0.02, 0.5, 1.2};
    cfg.sweep.target_spacings = 3000;
    const SweepResult res = run_sweep(cfg);
    REQUIRE(res.points.size() == 3);
    CHECK(res.points[0].eta > 0.55);
    CHECK(res.points[2].eta < 0.3);
    CHECK(res.points[0].mean_entropy < 0.5);
    CHECK(res.points[2].mean_entropy > 2.0);
}

TEST_CASE("run_sweep: dimension cap failures mark the sweep as failed") {
    RunConfig cfg;
    cfg.model.model = "tbrim";
    cfg.model.m = 12;
    cfg.model.particles = 4;  // dim 495
    cfg.master_seed = 1;
    cfg.sweep.grid = {0.1, 0.2};
    cfg.sweep.dim_cap = 100;
    const SweepResult res = run_sweep(cfg);
    CHECK(res.too_many_failures);
    for (const auto& p : res.points) {
        CHECK(p.failed);
        CHECK_FALSE(p.error.empty());
    }
}

TEST_CASE("analyzed_dim matches the built space") {
    RunConfig cfg = small_sgqc_sweep();
    CHECK(analyzed_dim(cfg.model, cfg.sweep) == 16);
    const Hamiltonian h = analyzed_space(cfg.model, cfg.sweep, 0.3, 9);
    CHECK(h.dim == 16);
    cfg.sweep.analysis = "band";
    CHECK(analyzed_dim(cfg.model, cfg.sweep) == 10);  // binom(5, 3)
    const Hamiltonian hb = analyzed_space(cfg.model, cfg.sweep, 0.3, 9);
    CHECK(hb.dim == 10);

    RunConfig tb;
    tb.model.model = "tbrim";
    tb.model.m = 10;
    tb.model.particles = 3;
    CHECK(analyzed_dim(tb.model, tb.sweep) == 120);
}

TEST_CASE("central_register_states picks central-band members") {
    RunConfig cfg = small_sgqc_sweep();
    const Hamiltonian h = analyzed_space(cfg.model, cfg.sweep, 0.3, 9);
    const auto states = central_register_states(h, cfg.model);
    REQUIRE_FALSE(states.empty());
    for (std::size_t i : states)
        CHECK(std::popcount(h.labels[i]) == central_band(cfg.model.n));
}

TEST_CASE("run_evolution: S(0) = 0, saturation below the dimension bound") {
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = 6;
    cfg.model.delta = 1.0;
    cfg.model.coupling = 0.4;
    cfg.model.seed = 17;
    cfg.master_seed = 17;
    cfg.evolve.initial_states = 5;
    cfg.evolve.points_per_decade = 8;
    const EvolveResult res = run_evolution(cfg);
    CHECK(res.initial_states == 5);
    CHECK(res.mean_entropy.front() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(res.mean_survival.front() == doctest::Approx(1.0).epsilon(1e-12));
    const double bound = std::log2(static_cast<double>(res.analyzed_dimension));
    for (double s : res.mean_entropy) CHECK(s <= bound + 1e-9);
    // entropy grows from zero
    CHECK(res.mean_entropy.back() > 1.0);
}

TEST_CASE("mean S_q is monotone in J at the ensemble level") {
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = 6;
    cfg.model.delta = 1.0;
    cfg.master_seed = 99;
    cfg.sweep.grid = {0.02, 0.04, 0.08, 0.15, 0.25, 0.4, 0.65, 1.0};
    cfg.sweep.realizations = 25;
    const SweepResult res = run_sweep(cfg);
    REQUIRE(res.points.size() == 8);
    // Spearman rank correlation of (J, mean S_q); the grid is ascending so the
    // entropy ranks must essentially match the grid order
    std::vector<double> sq;
    for (const auto& p : res.points) sq.push_back(p.mean_entropy);
    std::vector<std::size_t> rank(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) rank[i] = i;
    std::sort(rank.begin(), rank.end(), [&](auto a, auto b) { return sq[a] < sq[b]; });
    double d2 = 0.0;
    for (std::size_t pos = 0; pos < rank.size(); ++pos) {
        const double d = static_cast<double>(pos) - static_cast<double>(rank[pos]);
        d2 += d * d;
    }
    const double n = static_cast<double>(sq.size());
    const double spearman = 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
    CHECK(spearman > 0.95);
}

TEST_CASE("bootstrap stderr shrinks as 1/sqrt(N_S)") {
    RunConfig cfg;
    cfg.model.model = "sgqc";
    cfg.model.n = 6;
    cfg.model.delta = 1.0;
    cfg.master_seed = 7;
    cfg.sweep.grid = {0.3};
    cfg.sweep.target_spacings = 2000;
    const SweepResult small = run_sweep(cfg);
    cfg.sweep.target_spacings = 8000;
    const SweepResult large = run_sweep(cfg);
    REQUIRE(small.points[0].eta_stderr > 0.0);
    const double ratio = small.points[0].eta_stderr / large.points[0].eta_stderr;
    CHECK(ratio > 2.0 * 0.8);
    CHECK(ratio < 2.0 * 1.2);
}

TEST_CASE("manifest carries everything needed to reproduce the run") {
    RunConfig cfg = small_sgqc_sweep();
    const SweepResult res = run_sweep(cfg);
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "qchaos_manifest_test";
    fs::remove_all(dir);
    write_sweep_outputs(res, dir.string());
    std::ifstream in(dir / "manifest.json");
    REQUIRE(in.good());
    const auto j = nlohmann::json::parse(in);
    CHECK(j["config"]["model"]["model"] == "sgqc");
    CHECK(j["config"]["model"]["n"] == 5);
    CHECK(j["config"]["run"]["seed"] == 11);
    CHECK(j["config"]["sweep"]["grid"].size() == 3);
    CHECK(j["resolved_realizations"] == 3);
    CHECK(j.contains("wall_seconds"));
    CHECK(j["outputs"].size() >= 4);
    CHECK(j["points"].size() == 3);
    fs::remove_all(dir);
}

TEST_CASE("xi_scaling runs on a small tbrim instance") {
    RunConfig cfg;
    cfg.model.model = "tbrim";
    cfg.model.m = 10;
    cfg.model.particles = 3;
    cfg.model.Delta = 1.0;
    cfg.master_seed = 23;
    cfg.sweep.grid = {0.2, 0.3};
    cfg.sweep.realizations = 2;
    const auto pts = xi_scaling(cfg);
    REQUIRE(pts.size() == 2);
    for (const auto& p : pts) {
        CHECK(p.xi_mean > 1.0);
        CHECK(p.x > 0.0);
    }
    CHECK(pts[1].xi_mean > pts[0].xi_mean);
}
