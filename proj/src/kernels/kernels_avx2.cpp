#include "kernels_impl.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cfloat>
#include <cmath>

namespace qchaos::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double sum_squares_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d a = _mm256_loadu_pd(x + i);
        const __m256d b = _mm256_loadu_pd(x + i + 4);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
        acc1 = _mm256_fmadd_pd(b, b, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x + i);
        acc0 = _mm256_fmadd_pd(a, a, acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void squares_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(a, a));
    }
    for (; i < n; ++i) out[i] = x[i] * x[i];
}

void abs_squares_avx2(const double* re, const double* im, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(re + i);
        const __m256d m = _mm256_loadu_pd(im + i);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m)));
    }
    for (; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

// Natural log for 4 lanes of normal positive doubles, cephes log.c rational
// approximation: x = m * 2^e with m in [sqrt(1/2), sqrt(2)), ln x = ln m + e ln 2.
// Accuracy ~2 ulp, plenty under the 1e-12 equivalence tolerance used in tests.
inline __m256d log_pd(__m256d x) {
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll);
    const __m256i half_expo = _mm256_set1_epi64x(0x3FE0000000000000ll);
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);  // 2^52

    __m256i bits = _mm256_castpd_si256(x);
    // biased exponent as double via the 2^52 shift trick
    __m256i expo_i = _mm256_srli_epi64(bits, 52);
    __m256d expo = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(expo_i, magic)),
                                 _mm256_castsi256_pd(magic));
    __m256d e = _mm256_sub_pd(expo, _mm256_set1_pd(1022.0));
    // mantissa scaled into [0.5, 1)
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_expo));
    // below sqrt(1/2): double the mantissa, drop the exponent by one
    const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
    m = _mm256_add_pd(m, _mm256_and_pd(small, m));
    e = _mm256_sub_pd(e, _mm256_and_pd(small, one));

    const __m256d z = _mm256_sub_pd(m, one);
    const __m256d zz = _mm256_mul_pd(z, z);

    __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(7.70838733755885391666e0));

    __m256d q = _mm256_add_pd(z, _mm256_set1_pd(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.31251620126765340583e1));

    // ln(1+z) = z - z^2/2 + z^3 P(z)/Q(z), ln2 split hi/lo for the e*ln2 term
    __m256d r = _mm256_mul_pd(_mm256_mul_pd(z, zz), _mm256_div_pd(p, q));
    r = _mm256_fmadd_pd(e, _mm256_set1_pd(-2.121944400546905827679e-4), r);
    r = _mm256_fnmadd_pd(half, zz, r);
    __m256d res = _mm256_add_pd(z, r);
    return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), res);
}

double entropy_bits_avx2(const double* w, std::size_t n) {
    const __m256d tiny = _mm256_set1_pd(DBL_MIN);
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(w + i);
        const __m256d valid = _mm256_cmp_pd(v, tiny, _CMP_GE_OQ);
        // invalid lanes run through log at w=1 and are masked out of the sum
        const __m256d safe = _mm256_blendv_pd(one, v, valid);
        acc = _mm256_add_pd(acc, _mm256_and_pd(valid, _mm256_mul_pd(safe, log_pd(safe))));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        if (w[i] >= DBL_MIN) s += w[i] * std::log(w[i]);
    }
    return -s * (1.0 / M_LN2);
}

void complex_mul_avx2(const double* are, const double* aim, const double* bre,
                      const double* bim, double* ore, double* oim, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ar = _mm256_loadu_pd(are + i);
        const __m256d ai = _mm256_loadu_pd(aim + i);
        const __m256d br = _mm256_loadu_pd(bre + i);
        const __m256d bi = _mm256_loadu_pd(bim + i);
        const __m256d r = _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi));
        const __m256d s = _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br));
        _mm256_storeu_pd(ore + i, r);
        _mm256_storeu_pd(oim + i, s);
    }
    for (; i < n; ++i) {
        const double r = are[i] * bre[i] - aim[i] * bim[i];
        const double s = are[i] * bim[i] + aim[i] * bre[i];
        ore[i] = r;
        oim[i] = s;
    }
}

void axpy2_avx2(double a, double b, const double* x, double* yre, double* yim,
                std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(yre + i, _mm256_fmadd_pd(va, xv, _mm256_loadu_pd(yre + i)));
        _mm256_storeu_pd(yim + i, _mm256_fmadd_pd(vb, xv, _mm256_loadu_pd(yim + i)));
    }
    for (; i < n; ++i) {
        yre[i] += a * x[i];
        yim[i] += b * x[i];
    }
}

}  // namespace

const Ops avx2_ops = {
    sum_avx2,     sum_squares_avx2, dot_avx2,         squares_avx2,
    abs_squares_avx2, entropy_bits_avx2, complex_mul_avx2, axpy2_avx2,
};

}  // namespace qchaos::kernels::detail

#else  // not an AVX2 build

namespace qchaos::kernels::detail {
const Ops avx2_ops = {nullptr, nullptr, nullptr, nullptr,
                      nullptr, nullptr, nullptr, nullptr};
}

#endif
