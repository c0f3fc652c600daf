#pragma once

#include <cstddef>

// Internal kernel vtable. kernels_scalar.cpp and kernels_avx2.cpp fill one table
// each; dispatch.cpp selects between them at startup.

namespace qchaos::kernels::detail {

struct Ops {
    double (*sum)(const double*, std::size_t);
    double (*sum_squares)(const double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*squares)(const double*, double*, std::size_t);
    void (*abs_squares)(const double*, const double*, double*, std::size_t);
    double (*entropy_bits)(const double*, std::size_t);
    void (*complex_mul)(const double*, const double*, const double*, const double*,
                        double*, double*, std::size_t);
    void (*axpy2)(double, double, const double*, double*, double*, std::size_t);
};

extern const Ops scalar_ops;
extern const Ops avx2_ops;  // all-null when not compiled for x86-64

}  // namespace qchaos::kernels::detail
