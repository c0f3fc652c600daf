#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qchaos {

/// Unitary power-of-two complex FFT on split re/im arrays.
/// forward: X_k = n^{-1/2} sum_j x_j exp(-2*pi*i*j*k/n)
/// inverse is implemented as conj . forward . conj with the same twiddle table,
/// so forward(inverse(x)) == x to roundoff and conjugation commutes exactly.
class Fft {
public:
    explicit Fft(std::size_t n);

    void forward(std::span<double> re, std::span<double> im) const;
    void inverse(std::span<double> re, std::span<double> im) const;

    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    double norm_;
    std::vector<std::size_t> rev_;
    std::vector<double> tw_re_, tw_im_;
};

}  // namespace qchaos
