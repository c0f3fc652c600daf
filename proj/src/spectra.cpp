#include "qchaos/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>

#include "qchaos/error.hpp"
#include "qchaos/kernels.hpp"

namespace qchaos {

namespace {

// Tasks are parallelized at the realization level, so BLAS runs single-threaded
// unless the user overrides it; fixed thread count also keeps reruns bit-identical.
void pin_blas_threads() {
    static std::once_flag once;
    std::call_once(once, [] {
        ::setenv("OPENBLAS_NUM_THREADS", "1", 0);
        ::setenv("OMP_NUM_THREADS", "1", 0);
    });
}

}  // namespace

SpectralData diagonalize(const Hamiltonian& h, bool compute_vectors) {
    if (h.dim == 0) throw std::invalid_argument("diagonalize: empty Hamiltonian");
    pin_blas_threads();
    SpectralData sd;
    sd.dim = h.dim;
    sd.sector = h.sector;
    sd.eigenvalues.resize(h.dim);
    sd.eigenvectors = h.dense();
    const lapack_int n = static_cast<lapack_int>(h.dim);
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, compute_vectors ? 'V' : 'N', 'L', n,
                       sd.eigenvectors.data(), n, sd.eigenvalues.data());
    if (info != 0)
        throw NumericError("diagonalize: dsyevd failed with info=" + std::to_string(info) +
                           " at dim=" + std::to_string(h.dim) +
                           (info > 0 ? " (no convergence after the reported off-diagonal element)"
                                     : " (bad argument)"));
    if (!compute_vectors) sd.eigenvectors.clear();
    return sd;
}

double max_residual(const Hamiltonian& h, const SpectralData& sd) {
    if (!sd.has_vectors())
        throw std::invalid_argument("max_residual: spectral data has no eigenvectors");
    std::vector<double> hv(h.dim);
    double worst = 0.0;
    for (std::size_t m = 0; m < sd.dim; ++m) {
        const auto v = sd.vector(m);
        h.apply(v, hv);
        for (std::size_t i = 0; i < h.dim; ++i)
            worst = std::max(worst, std::abs(hv[i] - sd.eigenvalues[m] * v[i]));
    }
    return worst;
}

SpacingSample unfold(std::span<const double> eigenvalues, double window_fraction,
                     int smoothing_halfwidth) {
    if (window_fraction <= 0.0 || window_fraction > 1.0)
        throw std::invalid_argument("unfold: window_fraction must be in (0, 1]");
    if (smoothing_halfwidth < 0)
        throw std::invalid_argument("unfold: smoothing_halfwidth must be >= 0");
    const std::size_t n = eigenvalues.size();
    const std::size_t want = static_cast<std::size_t>(
        std::llround(window_fraction * static_cast<double>(n)));
    const std::size_t w = std::min(n, std::max<std::size_t>(want, 2));
    const std::size_t needed = 2 * static_cast<std::size_t>(smoothing_halfwidth) + 2;
    if (n < 2 || w < needed)
        throw std::invalid_argument("unfold: too few levels in window (" +
                                    std::to_string(w) + " < " + std::to_string(needed) + ")");
    const std::size_t start = (n - w) / 2;

    const std::size_t nsp = w - 1;
    std::vector<double> raw(nsp);
    for (std::size_t i = 0; i < nsp; ++i) {
        raw[i] = eigenvalues[start + i + 1] - eigenvalues[start + i];
        if (raw[i] < 0.0) throw std::invalid_argument("unfold: eigenvalues not ascending");
    }
    if (eigenvalues[start + w - 1] == eigenvalues[start])
        throw NumericError("unfold: degenerate spectrum (zero-width window)");

    SpacingSample out;
    out.spacings.resize(nsp);
    const std::size_t h = static_cast<std::size_t>(smoothing_halfwidth);
    for (std::size_t i = 0; i < nsp; ++i) {
        const std::size_t lo = i > h ? i - h : 0;
        const std::size_t hi = std::min(nsp - 1, i + h);
        double mean = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) mean += raw[j];
        mean /= static_cast<double>(hi - lo + 1);
        if (mean <= 0.0)
            throw NumericError("unfold: degenerate spectrum (vanishing local mean spacing)");
        out.spacings[i] = raw[i] / mean;
    }
    out.window = "central " + std::to_string(w) + " of " + std::to_string(n) +
                 " levels, halfwidth " + std::to_string(smoothing_halfwidth);
    return out;
}

namespace {

double wigner_cdf_at_s0() {
    return 1.0 - std::exp(-M_PI * EtaResult::s0 * EtaResult::s0 / 4.0);
}

double eta_denominator() {
    // F_P(s0) - F_W(s0) = exp(-pi s0^2/4) - exp(-s0)
    return std::exp(-M_PI * EtaResult::s0 * EtaResult::s0 / 4.0) - std::exp(-EtaResult::s0);
}

}  // namespace

EtaResult eta_from_counts(std::size_t below_s0, std::size_t total) {
    if (total < 100)
        throw std::invalid_argument("eta: need at least 100 spacings, got " +
                                    std::to_string(total));
    EtaResult r;
    r.count = total;
    const double empirical = static_cast<double>(below_s0) / static_cast<double>(total);
    r.eta = (empirical - wigner_cdf_at_s0()) / eta_denominator();
    return r;
}

EtaResult eta_statistic(std::span<const double> spacings) {
    std::size_t below = 0;
    for (double s : spacings)
        if (s <= EtaResult::s0) ++below;
    return eta_from_counts(below, spacings.size());
}

EtaResult eta_statistic(const SpacingSample& sample) { return eta_statistic(sample.spacings); }

Histogram spacing_histogram(const SpacingSample& sample, int bins) {
    if (bins < 2) throw std::invalid_argument("spacing_histogram: need at least 2 bins");
    if (sample.spacings.empty())
        throw std::invalid_argument("spacing_histogram: empty sample");
    const double s_max = *std::max_element(sample.spacings.begin(), sample.spacings.end());
    if (s_max <= 0.0)
        throw std::invalid_argument("spacing_histogram: all spacings are zero");
    const double width = s_max / bins;
    Histogram hist;
    hist.centers.resize(bins);
    hist.density.resize(bins);
    hist.counts.assign(bins, 0);
    for (int b = 0; b < bins; ++b) hist.centers[b] = (b + 0.5) * width;
    for (double s : sample.spacings) {
        auto b = static_cast<std::size_t>(s / width);
        if (b >= static_cast<std::size_t>(bins)) b = bins - 1;
        ++hist.counts[b];
    }
    const double norm = 1.0 / (static_cast<double>(sample.spacings.size()) * width);
    for (int b = 0; b < bins; ++b) hist.density[b] = static_cast<double>(hist.counts[b]) * norm;
    return hist;
}

double find_critical_coupling(std::span<const double> coupling,
                              std::span<const double> eta, double eta_c) {
    if (coupling.size() != eta.size() || coupling.size() < 2)
        throw std::invalid_argument("find_critical_coupling: need >= 2 curve points");
    for (std::size_t i = 1; i < coupling.size(); ++i)
        if (coupling[i] <= coupling[i - 1])
            throw std::invalid_argument("find_critical_coupling: couplings must ascend");
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (eta[i] == eta_c) return coupling[i];
        if (i + 1 < eta.size() && eta[i] > eta_c && eta[i + 1] < eta_c) {
            const double t = (eta[i] - eta_c) / (eta[i] - eta[i + 1]);
            return coupling[i] + t * (coupling[i + 1] - coupling[i]);
        }
    }
    throw NoCrossingError("find_critical_coupling: eta curve never crosses " +
                          std::to_string(eta_c));
}

}  // namespace qchaos
