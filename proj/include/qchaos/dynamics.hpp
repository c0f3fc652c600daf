#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qchaos/spectra.hpp"

// Exact time evolution in the eigenbasis (hbar = 1): survival probability
// F(t) of an initial register state, time-dependent entropy S(t), and the
// chaotic time scale tau_chi extracted from the 1/e decay of F.

namespace qchaos {

struct EvolutionRecord {
    std::vector<double> times;
    std::vector<double> survival;  // F_{i0 i0}(t)
    std::vector<double> entropy;   // S(t), bits
    std::size_t initial_state = 0;
};

struct EvolvedStates {
    std::size_t dim = 0;
    std::vector<double> re, im;  // column-major: state at times[k] is column k

    std::span<const double> re_at(std::size_t k) const { return {re.data() + k * dim, dim}; }
    std::span<const double> im_at(std::size_t k) const { return {im.data() + k * dim, dim}; }
};

/// psi(t) = sum_m exp(-i E_m t) <phi_m|psi0> |phi_m> at each requested time.
/// psi0 must be normalized; times ascending with t0 >= 0.
EvolvedStates evolve(const SpectralData& sd, std::span<const double> psi0_re,
                     std::span<const double> psi0_im, std::span<const double> times);

/// Survival probability and entropy of the full projection row F_{i i0}(t)
/// for the register basis state i0.
EvolutionRecord survival_and_entropy(const SpectralData& sd, std::size_t i0,
                                     std::span<const double> times);

/// First time F drops below 1/e, linearly interpolated between samples.
double extract_tau_chi(const EvolutionRecord& record);
double extract_tau_chi(std::span<const double> times, std::span<const double> survival);

/// Logarithmic grid over [1e-2/gamma, 1e2/gamma], points_per_decade per decade,
/// with t = 0 prepended.
std::vector<double> log_time_grid(double gamma_estimate, int points_per_decade = 64);

}  // namespace qchaos
