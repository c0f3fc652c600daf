#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qchaos/fft.hpp"
#include "qchaos/rng.hpp"

using namespace qchaos;

namespace {

// brute-force unitary DFT oracle
void dft_oracle(const std::vector<double>& re, const std::vector<double>& im,
                std::vector<double>& out_re, std::vector<double>& out_im) {
    const std::size_t n = re.size();
    out_re.assign(n, 0.0);
    out_im.assign(n, 0.0);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = -2.0 * M_PI * static_cast<double>(j * k % n) / n;
            acc += std::complex<double>(re[j], im[j]) * std::polar(1.0, a);
        }
        out_re[k] = acc.real() * norm;
        out_im[k] = acc.imag() * norm;
    }
}

}  // namespace

TEST_CASE("fft matches the DFT oracle") {
    for (std::size_t n : {2u, 8u, 64u, 128u}) {
        Rng rng(n);
        std::vector<double> re(n), im(n);
        for (std::size_t i = 0; i < n; ++i) {
            re[i] = rng.uniform(-1, 1);
            im[i] = rng.uniform(-1, 1);
        }
        std::vector<double> oracle_re, oracle_im;
        dft_oracle(re, im, oracle_re, oracle_im);
        Fft fft(n);
        fft.forward(re, im);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(re[i] == doctest::Approx(oracle_re[i]).epsilon(1e-12));
            CHECK(im[i] == doctest::Approx(oracle_im[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("fft inverse restores the input and preserves the norm") {
    const std::size_t n = 4096;
    Rng rng(7);
    std::vector<double> re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = rng.uniform(-1, 1);
        im[i] = rng.uniform(-1, 1);
    }
    const std::vector<double> re0 = re, im0 = im;
    double norm0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm0 += re[i] * re[i] + im[i] * im[i];

    Fft fft(n);
    fft.forward(re, im);
    double norm1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm1 += re[i] * re[i] + im[i] * im[i];
    CHECK(norm1 == doctest::Approx(norm0).epsilon(1e-13));  // Parseval

    fft.inverse(re, im);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max({worst, std::abs(re[i] - re0[i]), std::abs(im[i] - im0[i])});
    CHECK(worst < 1e-13);
}

TEST_CASE("fft rejects non-power-of-two sizes") {
    CHECK_THROWS_AS(Fft(0), std::invalid_argument);
    CHECK_THROWS_AS(Fft(3), std::invalid_argument);
    CHECK_THROWS_AS(Fft(100), std::invalid_argument);
}
