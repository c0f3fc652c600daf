#include "qchaos/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "qchaos/error.hpp"
#include "qchaos/kernels.hpp"

extern "C" void dgemm_(const char*, const char*, const int*, const int*, const int*,
                       const double*, const double*, const int*, const double*,
                       const int*, const double*, double*, const int*);

namespace qchaos {

namespace {

void check_times(std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("evolve: empty time grid");
    if (times.front() < 0.0) throw std::invalid_argument("evolve: times must be >= 0");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (times[k] < times[k - 1])
            throw std::invalid_argument("evolve: times must ascend");
}

void gemm(std::size_t dim, std::size_t cols, const double* a, const double* b, double* c) {
    const int n = static_cast<int>(dim);
    const int t = static_cast<int>(cols);
    const double one = 1.0, zero = 0.0;
    dgemm_("N", "N", &n, &t, &n, &one, a, &n, b, &n, &zero, c, &n);
}

}  // namespace

EvolvedStates evolve(const SpectralData& sd, std::span<const double> psi0_re,
                     std::span<const double> psi0_im, std::span<const double> times) {
    if (!sd.has_vectors())
        throw std::invalid_argument("evolve: spectral data has no eigenvectors");
    if (psi0_re.size() != sd.dim || psi0_im.size() != sd.dim)
        throw std::invalid_argument("evolve: initial state size mismatch");
    check_times(times);
    const double norm = kernels::sum_squares(psi0_re) + kernels::sum_squares(psi0_im);
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("evolve: initial state not normalized");

    const std::size_t dim = sd.dim;
    // eigenbasis coefficients c_m = <phi_m|psi0>
    std::vector<double> c_re(dim), c_im(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        c_re[m] = kernels::dot(sd.vector(m), psi0_re);
        c_im[m] = kernels::dot(sd.vector(m), psi0_im);
    }

    EvolvedStates out;
    out.dim = dim;
    out.re.assign(dim * times.size(), 0.0);
    out.im.assign(dim * times.size(), 0.0);
    std::vector<double> z_re(dim), z_im(dim);
    for (std::size_t k = 0; k < times.size(); ++k) {
        for (std::size_t m = 0; m < dim; ++m) {
            const double phase = sd.eigenvalues[m] * times[k];
            const double c = std::cos(phase), s = std::sin(phase);
            z_re[m] = c_re[m] * c + c_im[m] * s;
            z_im[m] = c_im[m] * c - c_re[m] * s;
        }
        std::span<double> yre{out.re.data() + k * dim, dim};
        std::span<double> yim{out.im.data() + k * dim, dim};
        for (std::size_t m = 0; m < dim; ++m)
            kernels::axpy2(z_re[m], z_im[m], sd.vector(m), yre, yim);
        const double nrm = kernels::sum_squares(yre) + kernels::sum_squares(yim);
        if (std::abs(nrm - 1.0) > 1e-9)
            throw NumericError("evolve: norm drift " + std::to_string(nrm - 1.0) +
                               " at t=" + std::to_string(times[k]));
    }
    return out;
}

EvolutionRecord survival_and_entropy(const SpectralData& sd, std::size_t i0,
                                     std::span<const double> times) {
    if (!sd.has_vectors())
        throw std::invalid_argument("survival_and_entropy: spectral data has no eigenvectors");
    if (i0 >= sd.dim)
        throw std::out_of_range("survival_and_entropy: initial state out of range");
    check_times(times);

    const std::size_t dim = sd.dim;
    const std::size_t nt = times.size();
    // c_m = <phi_m|i0> is row i0 of the eigenvector matrix
    std::vector<double> c(dim);
    for (std::size_t m = 0; m < dim; ++m) c[m] = sd.component(i0, m);

    // phased coefficient blocks, then two real GEMMs against the eigenvector matrix
    std::vector<double> z_re(dim * nt), z_im(dim * nt);
    for (std::size_t k = 0; k < nt; ++k)
        for (std::size_t m = 0; m < dim; ++m) {
            const double phase = sd.eigenvalues[m] * times[k];
            z_re[k * dim + m] = c[m] * std::cos(phase);
            z_im[k * dim + m] = -c[m] * std::sin(phase);
        }
    std::vector<double> psi_re(dim * nt), psi_im(dim * nt);
    gemm(dim, nt, sd.eigenvectors.data(), z_re.data(), psi_re.data());
    gemm(dim, nt, sd.eigenvectors.data(), z_im.data(), psi_im.data());

    EvolutionRecord rec;
    rec.initial_state = i0;
    rec.times.assign(times.begin(), times.end());
    rec.survival.resize(nt);
    rec.entropy.resize(nt);
    std::vector<double> f(dim);
    for (std::size_t k = 0; k < nt; ++k) {
        kernels::abs_squares({psi_re.data() + k * dim, dim}, {psi_im.data() + k * dim, dim}, f);
        const double total = kernels::sum(f);
        if (std::abs(total - 1.0) > 1e-9)
            throw NumericError("survival_and_entropy: projection probabilities sum to " +
                               std::to_string(total));
        rec.survival[k] = f[i0];
        rec.entropy[k] = kernels::entropy_bits(f);
    }
    return rec;
}

double extract_tau_chi(std::span<const double> times, std::span<const double> survival) {
    if (times.size() != survival.size() || times.empty())
        throw std::invalid_argument("extract_tau_chi: bad record");
    const double threshold = std::exp(-1.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (survival[k] < threshold) {
            if (k == 0) return times[0];
            const double f0 = survival[k - 1], f1 = survival[k];
            const double t = (f0 - threshold) / (f0 - f1);
            return times[k - 1] + t * (times[k] - times[k - 1]);
        }
    }
    throw NoCrossingError("extract_tau_chi: survival never decays below 1/e");
}

double extract_tau_chi(const EvolutionRecord& record) {
    return extract_tau_chi(record.times, record.survival);
}

std::vector<double> log_time_grid(double gamma_estimate, int points_per_decade) {
    if (gamma_estimate <= 0.0)
        throw std::invalid_argument("log_time_grid: gamma estimate must be positive");
    if (points_per_decade < 1)
        throw std::invalid_argument("log_time_grid: need >= 1 point per decade");
    const double t_lo = 1e-2 / gamma_estimate;
    const int decades = 4;
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(decades * points_per_decade) + 2);
    t.push_back(0.0);
    const int total = decades * points_per_decade;
    for (int k = 0; k <= total; ++k)
        t.push_back(t_lo * std::pow(10.0, static_cast<double>(k) / points_per_decade));
    return t;
}

}  // namespace qchaos
