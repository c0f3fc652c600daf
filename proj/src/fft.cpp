#include "qchaos/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qchaos {

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");
    norm_ = 1.0 / std::sqrt(static_cast<double>(n));
    rev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
        rev_[i] = r;
    }
    tw_re_.resize(n / 2);
    tw_im_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double a = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
        tw_re_[j] = std::cos(a);
        tw_im_[j] = std::sin(a);
    }
}

void Fft::forward(std::span<double> re, std::span<double> im) const {
    if (re.size() != n_ || im.size() != n_)
        throw std::invalid_argument("fft: buffer size mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = rev_[i];
        if (j > i) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n_ / len;
        for (std::size_t base = 0; base < n_; base += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const double wr = tw_re_[k * step];
                const double wi = tw_im_[k * step];
                const std::size_t a = base + k;
                const std::size_t b = a + half;
                const double tr = re[b] * wr - im[b] * wi;
                const double ti = re[b] * wi + im[b] * wr;
                re[b] = re[a] - tr;
                im[b] = im[a] - ti;
                re[a] += tr;
                im[a] += ti;
            }
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        re[i] *= norm_;
        im[i] *= norm_;
    }
}

void Fft::inverse(std::span<double> re, std::span<double> im) const {
    for (auto& v : im) v = -v;
    forward(re, im);
    for (auto& v : im) v = -v;
}

}  // namespace qchaos
