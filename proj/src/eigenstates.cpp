#include "qchaos/eigenstates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qchaos/error.hpp"
#include "qchaos/kernels.hpp"

namespace qchaos {

std::vector<double> overlaps(const SpectralData& sd, std::size_t m) {
    if (!sd.has_vectors())
        throw std::invalid_argument("overlaps: spectral data has no eigenvectors");
    if (m >= sd.dim) throw std::out_of_range("overlaps: eigenstate index out of range");
    std::vector<double> w(sd.dim);
    kernels::squares(sd.vector(m), w);
    return w;
}

namespace {

void check_row(std::span<const double> w, const char* who) {
    const double total = kernels::sum(w);
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument(std::string(who) +
                                    ": probability row not normalized (sum=" +
                                    std::to_string(total) + ")");
}

}  // namespace

double ipr(std::span<const double> w) {
    check_row(w, "ipr");
    return 1.0 / kernels::sum_squares(w);
}

double entropy_sq(std::span<const double> w) {
    check_row(w, "entropy_sq");
    return kernels::entropy_bits(w);
}

StateAnalysis analyze_states(const SpectralData& sd) {
    if (!sd.has_vectors())
        throw std::invalid_argument("analyze_states: spectral data has no eigenvectors");
    StateAnalysis out;
    out.energy = sd.eigenvalues;
    out.xi.resize(sd.dim);
    out.entropy.resize(sd.dim);
    std::vector<double> w(sd.dim);
    for (std::size_t m = 0; m < sd.dim; ++m) {
        kernels::squares(sd.vector(m), w);
        out.xi[m] = 1.0 / kernels::sum_squares(w);
        out.entropy[m] = kernels::entropy_bits(w);
    }
    return out;
}

MeltingMap melting_map(const SgqcParams& base, std::span<const double> couplings) {
    MeltingMap map;
    for (double j : couplings) {
        if (j < 0.0) {
            map.failures.push_back("coupling " + std::to_string(j) + ": negative");
            continue;
        }
        try {
            SgqcParams p = base;
            p.coupling = j;
            const Hamiltonian h = build_sgqc(p);
            auto [even, odd] = parity_sectors(h);
            for (const Hamiltonian* sector : {&even, &odd}) {
                const SpectralData sd = diagonalize(*sector);
                const StateAnalysis sa = analyze_states(sd);
                for (std::size_t m = 0; m < sd.dim; ++m)
                    map.rows.push_back({j, sa.energy[m], sa.entropy[m]});
            }
        } catch (const std::exception& e) {
            map.failures.push_back("coupling " + std::to_string(j) + ": " + e.what());
        }
    }
    std::stable_sort(map.rows.begin(), map.rows.end(), [](const auto& a, const auto& b) {
        return a.coupling != b.coupling ? a.coupling < b.coupling : a.energy < b.energy;
    });
    return map;
}

double critical_coupling_entropy(std::span<const double> coupling,
                                 std::span<const double> mean_entropy) {
    if (coupling.size() != mean_entropy.size() || coupling.size() < 2)
        throw std::invalid_argument("critical_coupling_entropy: need >= 2 curve points");
    for (std::size_t i = 0; i < coupling.size(); ++i) {
        if (mean_entropy[i] == 1.0) return coupling[i];
        if (i + 1 < coupling.size() && mean_entropy[i] < 1.0 && mean_entropy[i + 1] > 1.0) {
            const double t = (1.0 - mean_entropy[i]) / (mean_entropy[i + 1] - mean_entropy[i]);
            return coupling[i] + t * (coupling[i + 1] - coupling[i]);
        }
    }
    throw NoCrossingError("critical_coupling_entropy: S_q never crosses 1");
}

namespace {

double weighted_median(std::vector<std::pair<double, double>>& vw) {
    std::sort(vw.begin(), vw.end());
    double total = 0.0;
    for (const auto& [v, w] : vw) total += w;
    double acc = 0.0;
    for (const auto& [v, w] : vw) {
        acc += w;
        if (acc >= 0.5 * total) return v;
    }
    return vw.back().first;
}

struct Lorentz {
    double a, e0, gamma;
    double operator()(double x) const {
        const double d = x - e0;
        return a / (d * d + 0.25 * gamma * gamma);
    }
};

// Levenberg-Marquardt on (a, E0, Gamma) with numeric jacobian; the problem is
// tiny (3 params, ~100 points) so robustness beats cleverness here.
bool fit_lorentzian(std::span<const double> x, std::span<const double> y, Lorentz& p,
                    double* rms_out) {
    const std::size_t n = x.size();
    auto rms = [&](const Lorentz& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = q(x[i]) - y[i];
            s += r * r;
        }
        return std::sqrt(s / static_cast<double>(n));
    };
    double lambda = 1e-3;
    double best = rms(p);
    for (int iter = 0; iter < 200; ++iter) {
        double jtj[3][3] = {};
        double jtr[3] = {};
        const double step[3] = {std::abs(p.a) * 1e-6 + 1e-12,
                                std::abs(p.gamma) * 1e-6 + 1e-12,
                                std::abs(p.gamma) * 1e-6 + 1e-12};
        for (std::size_t i = 0; i < n; ++i) {
            const double r = p(x[i]) - y[i];
            double grad[3];
            for (int k = 0; k < 3; ++k) {
                Lorentz q = p;
                (k == 0 ? q.a : k == 1 ? q.e0 : q.gamma) += step[k];
                grad[k] = (q(x[i]) - p(x[i])) / step[k];
            }
            for (int k = 0; k < 3; ++k) {
                jtr[k] += grad[k] * r;
                for (int l = 0; l < 3; ++l) jtj[k][l] += grad[k] * grad[l];
            }
        }
        // solve (JtJ + lambda diag) d = -Jtr by Gaussian elimination
        double m[3][4];
        for (int k = 0; k < 3; ++k) {
            for (int l = 0; l < 3; ++l) m[k][l] = jtj[k][l];
            m[k][k] += lambda * (jtj[k][k] + 1e-30);
            m[k][3] = -jtr[k];
        }
        bool singular = false;
        for (int k = 0; k < 3 && !singular; ++k) {
            int piv = k;
            for (int l = k + 1; l < 3; ++l)
                if (std::abs(m[l][k]) > std::abs(m[piv][k])) piv = l;
            if (std::abs(m[piv][k]) < 1e-300) {
                singular = true;
                break;
            }
            std::swap(m[k], m[piv]);
            for (int l = k + 1; l < 3; ++l) {
                const double f = m[l][k] / m[k][k];
                for (int c = k; c < 4; ++c) m[l][c] -= f * m[k][c];
            }
        }
        if (singular) return false;
        double d[3];
        for (int k = 2; k >= 0; --k) {
            double s = m[k][3];
            for (int l = k + 1; l < 3; ++l) s -= m[k][l] * d[l];
            d[k] = s / m[k][k];
        }
        Lorentz trial{p.a + d[0], p.e0 + d[1], p.gamma + d[2]};
        const double r_trial = rms(trial);
        if (r_trial < best) {
            p = trial;
            const bool converged = best - r_trial < 1e-14 + 1e-10 * best;
            best = r_trial;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (converged) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    p.gamma = std::abs(p.gamma);
    *rms_out = best;
    return std::isfinite(best) && p.gamma > 0.0 && p.a > 0.0;
}

void bin_ldos(const std::vector<std::pair<double, double>>& offsets, double lo, double hi,
              int bins, LdosFit& out) {
    out.centers.resize(bins);
    out.density.assign(bins, 0.0);
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) out.centers[b] = lo + (b + 0.5) * width;
    double mass = 0.0;
    for (const auto& [x, w] : offsets) {
        if (x < lo || x >= hi) continue;
        auto b = static_cast<std::size_t>((x - lo) / width);
        if (b >= static_cast<std::size_t>(bins)) b = bins - 1;
        out.density[b] += w;
        mass += w;
    }
    if (mass > 0.0)
        for (double& d : out.density) d /= mass * width;
}

}  // namespace

LdosFit ldos_fit(const SpectralData& sd, std::span<const double> unperturbed_energies,
                 std::span<const std::size_t> reference_states, int bins) {
    if (!sd.has_vectors())
        throw std::invalid_argument("ldos_fit: spectral data has no eigenvectors");
    if (reference_states.size() < 20)
        throw std::invalid_argument("ldos_fit: need at least 20 reference states");
    if (unperturbed_energies.size() != sd.dim)
        throw std::invalid_argument("ldos_fit: unperturbed energy list size mismatch");

    std::vector<double> off, wgt;
    off.reserve(reference_states.size() * sd.dim);
    wgt.reserve(reference_states.size() * sd.dim);
    for (std::size_t i : reference_states) {
        if (i >= sd.dim) throw std::out_of_range("ldos_fit: reference state out of range");
        const double e0 = unperturbed_energies[i];
        for (std::size_t m = 0; m < sd.dim; ++m) {
            const double amp = sd.component(i, m);
            off.push_back(sd.eigenvalues[m] - e0);
            wgt.push_back(amp * amp);
        }
    }
    return ldos_fit_samples(off, wgt, bins);
}

LdosFit ldos_fit_samples(std::span<const double> sample_offsets,
                         std::span<const double> sample_weights, int bins) {
    if (sample_offsets.size() != sample_weights.size() || sample_offsets.empty())
        throw std::invalid_argument("ldos_fit: bad sample arrays");
    if (bins < 10) throw std::invalid_argument("ldos_fit: need at least 10 bins");

    std::vector<std::pair<double, double>> offsets;
    offsets.reserve(sample_offsets.size());
    for (std::size_t i = 0; i < sample_offsets.size(); ++i)
        offsets.emplace_back(sample_offsets[i], sample_weights[i]);

    LdosFit out;
    auto med = offsets;
    const double e_center = weighted_median(med);
    std::vector<std::pair<double, double>> dev;
    dev.reserve(offsets.size());
    for (const auto& [x, w] : offsets) dev.emplace_back(std::abs(x - e_center), w);
    const double gamma0 = 2.0 * weighted_median(dev);  // Lorentzian: median|x-E0| = Gamma/2

    if (gamma0 <= 0.0) {
        bin_ldos(offsets, e_center - 1.0, e_center + 1.0, bins, out);
        out.message = "degenerate delta-like density, fit rejected";
        return out;
    }

    // initial binning, then one refinement pass around the fitted peak
    double lo = e_center - 5.0 * gamma0, hi = e_center + 5.0 * gamma0;
    Lorentz p{2.0 / (M_PI * gamma0), e_center, gamma0};
    for (int pass = 0; pass < 2; ++pass) {
        bin_ldos(offsets, lo, hi, bins, out);
        const double peak = *std::max_element(out.density.begin(), out.density.end());
        const double total = kernels::sum(out.density);
        if (peak > 0.9 * total) {
            out.message = "degenerate delta-like density, fit rejected";
            out.ok = false;
            return out;
        }
        double rms = 0.0;
        if (!fit_lorentzian(out.centers, out.density, p, &rms)) {
            out.message = "fit did not converge";
            out.ok = false;
            return out;
        }
        out.residual = rms;
        lo = p.e0 - 5.0 * p.gamma;
        hi = p.e0 + 5.0 * p.gamma;
    }
    out.width = p.gamma;
    out.center = p.e0;
    out.amplitude = p.a;
    out.fit_density.resize(out.centers.size());
    for (std::size_t b = 0; b < out.centers.size(); ++b)
        out.fit_density[b] = p(out.centers[b]);
    out.ok = true;
    return out;
}

}  // namespace qchaos
