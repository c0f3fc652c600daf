#include <cfloat>
#include <cmath>

#include "kernels_impl.hpp"

// Reference kernels. Plain loops, kept branch-free where it matters so the
// compiler's autovectorizer does not reorder sums differently between builds.

namespace qchaos::kernels::detail {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void squares_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void abs_squares_scalar(const double* re, const double* im, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

double entropy_bits_scalar(const double* w, std::size_t n) {
    // contract: terms below DBL_MIN (incl. zeros and subnormals) contribute 0
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] >= DBL_MIN) acc += w[i] * std::log(w[i]);
    }
    return -acc * (1.0 / M_LN2);
}

void complex_mul_scalar(const double* are, const double* aim, const double* bre,
                        const double* bim, double* ore, double* oim, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double r = are[i] * bre[i] - aim[i] * bim[i];
        const double s = are[i] * bim[i] + aim[i] * bre[i];
        ore[i] = r;
        oim[i] = s;
    }
}

void axpy2_scalar(double a, double b, const double* x, double* yre, double* yim,
                  std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        yre[i] += a * x[i];
        yim[i] += b * x[i];
    }
}

}  // namespace

const Ops scalar_ops = {
    sum_scalar,     sum_squares_scalar, dot_scalar,         squares_scalar,
    abs_squares_scalar, entropy_bits_scalar, complex_mul_scalar, axpy2_scalar,
};

}  // namespace qchaos::kernels::detail
