#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Arithmetic inner loops shared by the whole library. Every kernel has a scalar
// reference implementation and (on x86-64) an AVX2+FMA variant; the active variant
// is picked once at startup from CPUID and can be overridden with set_backend()
// or the QCHAOS_KERNELS environment variable (scalar|avx2). The two variants are
// equivalence-tested against each other in tests/test_kernels.cpp.

namespace qchaos::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_available(Backend b);
/// Returns false (and leaves the active backend unchanged) if b is unavailable.
bool set_backend(Backend b);
std::string_view backend_name(Backend b);

/// sum of x[i]
double sum(std::span<const double> x);

/// sum of x[i]^2
double sum_squares(std::span<const double> x);

/// dot product; x and y must have equal length
double dot(std::span<const double> x, std::span<const double> y);

/// out[i] = x[i]^2
void squares(std::span<const double> x, std::span<double> out);

/// out[i] = re[i]^2 + im[i]^2
void abs_squares(std::span<const double> re, std::span<const double> im,
                 std::span<double> out);

/// Shannon entropy -sum w log2 w in bits, with 0 log 0 = 0.
/// Terms below DBL_MIN are dropped (their contribution is < 1e-290 bits).
double entropy_bits(std::span<const double> w);

/// Elementwise complex product (a_re,a_im) * (b_re,b_im) -> (out_re,out_im).
/// out may alias a.
void complex_mul(std::span<const double> a_re, std::span<const double> a_im,
                 std::span<const double> b_re, std::span<const double> b_im,
                 std::span<double> out_re, std::span<double> out_im);

/// Fused dual axpy: y_re += a*x and y_im += b*x in one pass over x.
void axpy2(double a, double b, std::span<const double> x,
           std::span<double> y_re, std::span<double> y_im);

}  // namespace qchaos::kernels
