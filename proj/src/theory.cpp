#include "qchaos/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "qchaos/models.hpp"

namespace qchaos::theory {

BorderPrediction predict_uc_tbrim(int m, int n, double Delta, double C) {
    if (n <= 0 || n >= m) throw std::invalid_argument("predict_uc_tbrim: need 0 < n < m");
    if (Delta <= 0.0 || C <= 0.0)
        throw std::invalid_argument("predict_uc_tbrim: Delta and C must be positive");
    const double B = (2.0 * m - 4.0) * Delta;
    const double K = static_cast<double>(count_directly_coupled(m, n));
    return {C * B / K, "uc_tbrim"};
}

BorderPrediction predict_jc_sgqc(double delta, int n, double Cq) {
    if (n < 1) throw std::invalid_argument("predict_jc_sgqc: need n >= 1");
    if (delta <= 0.0 || Cq <= 0.0)
        throw std::invalid_argument("predict_jc_sgqc: delta and Cq must be positive");
    return {Cq * delta / n, "jc_sgqc"};
}

BorderPrediction predict_jcs_sgqc(double delta, int n) {
    if (n < 1) throw std::invalid_argument("predict_jcs_sgqc: need n >= 1");
    if (delta <= 0.0) throw std::invalid_argument("predict_jcs_sgqc: delta must be positive");
    return {jcs_coefficient * delta / n, "jcs_sgqc"};
}

BorderPrediction predict_gamma(double coupling, double delta_or_rho, int n,
                               GammaRegime regime) {
    if (coupling < 0.0) throw std::invalid_argument("predict_gamma: coupling must be >= 0");
    switch (regime) {
        case GammaRegime::sgqc_weak: {
            if (delta_or_rho <= 0.0 || n < 1)
                throw std::invalid_argument("predict_gamma: need delta > 0 and n >= 1");
            BorderPrediction p{coupling * coupling * n / delta_or_rho, "gamma_sgqc_weak",
                               true};
            p.warning = coupling > delta_or_rho;
            return p;
        }
        case GammaRegime::sgqc_strong: {
            if (n < 1) throw std::invalid_argument("predict_gamma: need n >= 1");
            BorderPrediction p{coupling * std::sqrt(static_cast<double>(n)),
                               "gamma_sgqc_strong", true};
            p.warning = delta_or_rho > 0.0 && coupling < delta_or_rho;
            return p;
        }
        case GammaRegime::tbrim_golden_rule: {
            if (delta_or_rho <= 0.0)
                throw std::invalid_argument("predict_gamma: need rho_c > 0");
            return {2.0 * M_PI * coupling * coupling * delta_or_rho / 3.0,
                    "gamma_golden_rule"};
        }
    }
    throw std::invalid_argument("predict_gamma: unknown regime");
}

BorderPrediction predict_xi(double U, double rho_c, double rho_n) {
    if (U < 0.0 || rho_c <= 0.0 || rho_n <= 0.0)
        throw std::invalid_argument("predict_xi: need U >= 0 and positive densities");
    BorderPrediction p{2.0 * U * U * rho_c * rho_n, "xi_chaotic"};
    p.warning = (U == 0.0);  // perturbative regime, formula inapplicable below the border
    return p;
}

std::pair<BorderPrediction, BorderPrediction> thermalization_border(double Delta, double U) {
    if (Delta <= 0.0 || U <= 0.0)
        throw std::invalid_argument("thermalization_border: need positive Delta and U");
    const double ratio = Delta / U;
    BorderPrediction de{Delta * std::pow(ratio, 2.0 / 3.0), "deltaE_ch", true};
    BorderPrediction t{Delta * std::cbrt(ratio), "T_ch", true};
    return {de, t};
}

std::pair<BorderPrediction, BorderPrediction> decoherence_scales(double Gamma_T,
                                                                 double omega) {
    if (Gamma_T <= 0.0 || omega <= 0.0)
        throw std::invalid_argument("decoherence_scales: need positive Gamma_T and omega");
    BorderPrediction chi{1.0 / Gamma_T, "tau_chi_noise", true};
    BorderPrediction phi{1.0 / std::cbrt(omega * omega * Gamma_T), "tau_phi_noise", true};
    return {chi, phi};
}

BorderPrediction multiqubit_spacing(int n, double delta0) {
    if (n < 1 || delta0 <= 0.0)
        throw std::invalid_argument("multiqubit_spacing: need n >= 1 and delta0 > 0");
    return {n * delta0 / std::pow(2.0, n), "multiqubit_spacing"};
}

double two_particle_density(int m, double Delta) {
    if (m < 3 || Delta <= 0.0)
        throw std::invalid_argument("two_particle_density: need m >= 3 and Delta > 0");
    const double n2 = 0.5 * m * (m - 1);
    return n2 / ((2.0 * m - 4.0) * Delta);
}

double sgqc_coupled_density(int n, double delta) {
    if (n < 1 || delta <= 0.0)
        throw std::invalid_argument("sgqc_coupled_density: need n >= 1 and delta > 0");
    return n / (2.0 * delta);
}

double tbrim_coupled_density(int m, int n, double Delta) {
    const double K = static_cast<double>(count_directly_coupled(m, n));
    return K / ((2.0 * m - 4.0) * Delta);
}

}  // namespace qchaos::theory
