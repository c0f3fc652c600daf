#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qchaos/models.hpp"

// Spectral statistics: full diagonalization, local unfolding to unit mean
// spacing, the eta crossover statistic between Poisson and Wigner-Dyson spacing
// laws, P(s) histograms, and critical-coupling extraction from eta sweeps.

namespace qchaos {

struct SpectralData {
    std::size_t dim = 0;
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> eigenvectors;  // column-major; eigenvector m is column m; empty if not computed
    std::string sector;

    bool has_vectors() const { return !eigenvectors.empty(); }
    std::span<const double> vector(std::size_t m) const {
        return {eigenvectors.data() + m * dim, dim};
    }
    double component(std::size_t i, std::size_t m) const {
        return eigenvectors[m * dim + i];
    }
};

/// Full symmetric eigendecomposition (LAPACK dsyevd).
SpectralData diagonalize(const Hamiltonian& h, bool compute_vectors = true);

/// max_m ||H v_m - E_m v_m||_inf, for residual checks against tol * max|E|.
double max_residual(const Hamiltonian& h, const SpectralData& sd);

struct SpacingSample {
    std::vector<double> spacings;  // unfolded, dimensionless, mean ~ 1
    std::string window;            // description of the spectral slice used
};

/// Central window_fraction of the sorted spectrum, chosen symmetrically about
/// the median; each raw spacing is divided by the moving average of the
/// 2*smoothing_halfwidth+1 surrounding raw spacings (clipped at the window edge).
/// The quarter-spectrum default keeps the statistics inside the band center,
/// where the crossover happens first; wider windows wash the border upward.
SpacingSample unfold(std::span<const double> eigenvalues, double window_fraction = 0.25,
                     int smoothing_halfwidth = 10);

struct EtaResult {
    double eta = 0.0;
    std::size_t count = 0;
    /// intersection point of the Poisson and Wigner spacing densities
    static constexpr double s0 = 0.4729;
};

/// eta = [F(s0) - F_W(s0)] / [F_P(s0) - F_W(s0)] with F the empirical spacing CDF;
/// 1 for Poisson statistics, 0 for Wigner-Dyson. Needs at least 100 spacings.
EtaResult eta_statistic(const SpacingSample& sample);
EtaResult eta_statistic(std::span<const double> spacings);
/// Same statistic from pre-pooled CDF counts (used when pooling realizations).
EtaResult eta_from_counts(std::size_t below_s0, std::size_t total);

struct Histogram {
    std::vector<double> centers;
    std::vector<double> density;        // normalized to unit area
    std::vector<std::size_t> counts;
};

/// Normalized P(s) histogram over [0, max spacing].
Histogram spacing_histogram(const SpacingSample& sample, int bins);

/// Coupling where the eta curve first crosses eta_c from above, linearly
/// interpolated between the bracketing grid points. Exact grid hits win.
double find_critical_coupling(std::span<const double> coupling,
                              std::span<const double> eta, double eta_c);

}  // namespace qchaos
