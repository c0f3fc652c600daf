#pragma once

#include <string_view>
#include <utility>

// Closed-form border and time-scale predictors. Formulas that carry no
// universal constant are returned with constant 1 and flagged
// order_of_magnitude, so callers assert scaling only.

namespace qchaos::theory {

struct BorderPrediction {
    double value = 0.0;
    std::string_view formula;
    bool order_of_magnitude = false;
    bool warning = false;  // inputs outside the regime the formula assumes
};

/// Chaos border of the two-body random interaction model:
/// U_c = C * B / K with B = (2m-4) Delta and K the direct-transition count.
BorderPrediction predict_uc_tbrim(int m, int n, double Delta, double C = 0.58);

/// Chaos border of the qubit register: J_c = C_q * delta / n.
BorderPrediction predict_jc_sgqc(double delta, int n, double Cq = 3.16);

/// Entropy border coefficient: J_cs = 0.41 * delta / n.
inline constexpr double jcs_coefficient = 0.41;
BorderPrediction predict_jcs_sgqc(double delta, int n);

/// Fitted reference constant U_c * rho_c = 0.62 from the layer-model analysis.
inline constexpr double uc_rho_c_fit = 0.62;

enum class GammaRegime {
    sgqc_weak,          // Gamma ~ J^2 n / delta, valid for J < delta
    sgqc_strong,        // Gamma ~ J sqrt(n), valid for J > delta
    tbrim_golden_rule,  // Gamma = 2 pi U^2 rho_c / 3
};

/// Eigenstate spreading width. For the register-model regimes pass
/// (J, delta, n); for the golden rule pass (U, rho_c, anything).
BorderPrediction predict_gamma(double coupling, double delta_or_rho, int n,
                               GammaRegime regime);

/// IPR in the chaotic regime: xi ~ 2 U^2 rho_c rho_n. Flagged below the border
/// (U = 0) where the formula does not apply.
BorderPrediction predict_xi(double U, double rho_c, double rho_n);

/// Dynamical thermalization border: (deltaE_ch, T_ch) =
/// (Delta (Delta/U)^{2/3}, Delta (Delta/U)^{1/3}), constant set to 1.
std::pair<BorderPrediction, BorderPrediction> thermalization_border(double Delta, double U);

/// Decoherence time scales for noise rate Gamma_T and energy jump omega:
/// (tau_chi, tau_phi) = (1/Gamma_T, 1/(omega^2 Gamma_T)^{1/3}), constant 1.
std::pair<BorderPrediction, BorderPrediction> decoherence_scales(double Gamma_T, double omega);

/// Mean multi-qubit level spacing Delta_n = n Delta_0 / 2^n.
BorderPrediction multiqubit_spacing(int n, double delta0);

/// Two-particle density rho_2 = N_2 / B with N_2 = m(m-1)/2, B = (2m-4) Delta
/// (~ m / 4 Delta for large m).
double two_particle_density(int m, double Delta);

/// Density of directly coupled register states: each state couples to about n
/// others inside an energy window 2 delta.
double sgqc_coupled_density(int n, double delta);

/// Density of directly coupled determinants: rho_c = K / B.
double tbrim_coupled_density(int m, int n, double Delta);

}  // namespace qchaos::theory
