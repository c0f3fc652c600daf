#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qchaos/models.hpp"
#include "qchaos/spectra.hpp"

// Eigenstate complexity in the register basis: overlap rows W_im, inverse
// participation ratio, quantum eigenstate entropy S_q, the (J, E, S_q) melting
// map, the entropy-based critical coupling, and the Breit-Wigner fit of the
// local density of states.

namespace qchaos {

/// W_im = |<psi_i|phi_m>|^2 for all register states i of the analyzed basis.
std::vector<double> overlaps(const SpectralData& sd, std::size_t m);

/// Inverse participation ratio 1 / sum_i W_i^2 of a probability row.
/// Rows off normalization by more than 1e-6 are rejected.
double ipr(std::span<const double> w);

/// Quantum eigenstate entropy -sum_i W_i log2 W_i in bits (0 log 0 = 0).
double entropy_sq(std::span<const double> w);

struct StateAnalysis {
    std::vector<double> energy;   // E_m
    std::vector<double> xi;       // IPR per eigenstate
    std::vector<double> entropy;  // S_q per eigenstate, bits
};

/// Per-eigenstate energy, IPR and S_q for a full spectral decomposition.
StateAnalysis analyze_states(const SpectralData& sd);

struct MeltingMapRow {
    double coupling;
    double energy;
    double entropy;
};

struct MeltingMap {
    std::vector<MeltingMapRow> rows;        // one per eigenstate per coupling
    std::vector<std::string> failures;      // per-grid-point error messages
};

/// S_q of every eigenstate (both parity sectors) on an ascending J grid, one
/// disorder realization (same seed at every J, so couplings scale with J).
MeltingMap melting_map(const SgqcParams& base, std::span<const double> couplings);

/// Coupling where mean S_q first crosses 1 from below, linearly interpolated.
double critical_coupling_entropy(std::span<const double> coupling,
                                 std::span<const double> mean_entropy);

struct LdosFit {
    std::vector<double> centers;      // energy offsets E_m - E_i^0
    std::vector<double> density;      // aggregated W density, unit area over the range
    std::vector<double> fit_density;  // fitted Lorentzian evaluated at centers
    double width = 0.0;               // fitted Gamma
    double center = 0.0;              // fitted peak position
    double amplitude = 0.0;
    double residual = 0.0;            // rms(density - fit)
    bool ok = false;
    std::string message;
};

/// Aggregates W_im against E_m - E_i^0 over the reference register states, bins
/// it (101 bins across +-5 estimated widths, one refinement pass) and
/// least-squares fits a Lorentzian a / ((E-E0)^2 + Gamma^2/4). Degenerate
/// delta-like data is reported with ok=false and the binned data retained.
LdosFit ldos_fit(const SpectralData& sd, std::span<const double> unperturbed_energies,
                 std::span<const std::size_t> reference_states, int bins = 101);

/// Same fit on pre-aggregated (energy offset, weight) samples.
LdosFit ldos_fit_samples(std::span<const double> offsets, std::span<const double> weights,
                         int bins = 101);

}  // namespace qchaos
