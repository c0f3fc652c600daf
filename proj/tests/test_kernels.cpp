#include <doctest.h>

#include <cmath>
#include <vector>

#include "qchaos/kernels.hpp"
#include "qchaos/rng.hpp"

using namespace qchaos;
namespace k = qchaos::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                  double hi = 1.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

std::vector<double> random_weights(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = rng.uniform01();
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

struct BackendGuard {
    k::Backend saved = k::active_backend();
    ~BackendGuard() { k::set_backend(saved); }
};

template <typename Fn>
void for_each_backend(Fn&& fn) {
    BackendGuard guard;
    for (auto b : {k::Backend::scalar, k::Backend::avx2}) {
        if (!k::backend_available(b)) continue;
        REQUIRE(k::set_backend(b));
        fn(b);
    }
}

}  // namespace

TEST_CASE("kernel backends: scalar always available") {
    CHECK(k::backend_available(k::Backend::scalar));
    CHECK(k::backend_name(k::Backend::scalar) == "scalar");
    CHECK(k::backend_name(k::Backend::avx2) == "avx2");
}

TEST_CASE("sum / sum_squares / dot match simple references on every backend") {
    const auto x = random_vector(1003, 11);
    const auto y = random_vector(1003, 12);
    double ref_sum = 0.0, ref_sq = 0.0, ref_dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ref_sum += x[i];
        ref_sq += x[i] * x[i];
        ref_dot += x[i] * y[i];
    }
    for_each_backend([&](k::Backend) {
        CHECK(k::sum(x) == doctest::Approx(ref_sum).epsilon(1e-13));
        CHECK(k::sum_squares(x) == doctest::Approx(ref_sq).epsilon(1e-13));
        CHECK(k::dot(x, y) == doctest::Approx(ref_dot).epsilon(1e-13));
    });
}

TEST_CASE("squares and abs_squares elementwise") {
    const auto re = random_vector(257, 21);
    const auto im = random_vector(257, 22);
    for_each_backend([&](k::Backend) {
        std::vector<double> sq(re.size()), ab(re.size());
        k::squares(re, sq);
        k::abs_squares(re, im, ab);
        for (std::size_t i = 0; i < re.size(); ++i) {
            CHECK(sq[i] == re[i] * re[i]);
            CHECK(ab[i] == doctest::Approx(re[i] * re[i] + im[i] * im[i]).epsilon(1e-15));
        }
    });
}

TEST_CASE("entropy_bits: exact values and edge cases") {
    for_each_backend([&](k::Backend) {
        CHECK(k::entropy_bits(std::vector<double>{1.0}) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(k::entropy_bits(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0));
        CHECK(k::entropy_bits(std::vector<double>{0.25, 0.25, 0.25, 0.25}) ==
              doctest::Approx(2.0));
        // zeros and subnormals contribute nothing
        CHECK(k::entropy_bits(std::vector<double>{0.5, 0.5, 0.0, 1e-320}) ==
              doctest::Approx(1.0).epsilon(1e-14));
        CHECK(k::entropy_bits(std::vector<double>{0.75, 0.25}) ==
              doctest::Approx(-(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25))));
    });
}

TEST_CASE("avx2 kernels agree with scalar reference") {
    if (!k::backend_available(k::Backend::avx2)) {
        MESSAGE("avx2 backend not available on this host, skipping equivalence checks");
        return;
    }
    BackendGuard guard;
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u, 4096u}) {
        const auto x = random_vector(n, 100 + n);
        const auto y = random_vector(n, 200 + n);
        const auto w = random_weights(n, 300 + n);

        REQUIRE(k::set_backend(k::Backend::scalar));
        const double s_sum = k::sum(x);
        const double s_sq = k::sum_squares(x);
        const double s_dot = k::dot(x, y);
        const double s_ent = k::entropy_bits(w);
        std::vector<double> s_mul_re(n), s_mul_im(n);
        k::complex_mul(x, y, y, x, s_mul_re, s_mul_im);
        std::vector<double> s_yre(n, 0.5), s_yim(n, -0.25);
        k::axpy2(0.7, -1.3, x, s_yre, s_yim);

        REQUIRE(k::set_backend(k::Backend::avx2));
        CHECK(k::sum(x) == doctest::Approx(s_sum).epsilon(1e-13));
        CHECK(k::sum_squares(x) == doctest::Approx(s_sq).epsilon(1e-13));
        CHECK(k::dot(x, y) == doctest::Approx(s_dot).epsilon(1e-13));
        CHECK(k::entropy_bits(w) == doctest::Approx(s_ent).epsilon(1e-12));
        std::vector<double> v_mul_re(n), v_mul_im(n);
        k::complex_mul(x, y, y, x, v_mul_re, v_mul_im);
        std::vector<double> v_yre(n, 0.5), v_yim(n, -0.25);
        k::axpy2(0.7, -1.3, x, v_yre, v_yim);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(v_mul_re[i] == doctest::Approx(s_mul_re[i]).epsilon(1e-14));
            CHECK(v_mul_im[i] == doctest::Approx(s_mul_im[i]).epsilon(1e-14));
            CHECK(v_yre[i] == doctest::Approx(s_yre[i]).epsilon(1e-14));
            CHECK(v_yim[i] == doctest::Approx(s_yim[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("avx2 entropy stays accurate across 300 orders of magnitude") {
    if (!k::backend_available(k::Backend::avx2)) return;
    BackendGuard guard;
    // weights spanning the full normal range exercise the exponent handling
    std::vector<double> w;
    for (int e = -300; e <= 0; e += 3) w.push_back(std::pow(10.0, e));
    double ref = 0.0;
    for (double v : w) ref -= v * std::log2(v);
    REQUIRE(k::set_backend(k::Backend::avx2));
    CHECK(k::entropy_bits(w) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("complex_mul supports in-place use") {
    for_each_backend([&](k::Backend) {
        std::vector<double> ar = {1.0, 0.0, 2.0, -1.0, 0.5};
        std::vector<double> ai = {0.0, 1.0, -1.0, 0.5, 0.5};
        const std::vector<double> br = {0.0, 0.0, 1.0, 2.0, -0.5};
        const std::vector<double> bi = {1.0, 1.0, 1.0, 0.0, 0.25};
        std::vector<double> er(5), ei(5);
        for (std::size_t i = 0; i < 5; ++i) {
            er[i] = ar[i] * br[i] - ai[i] * bi[i];
            ei[i] = ar[i] * bi[i] + ai[i] * br[i];
        }
        k::complex_mul(ar, ai, br, bi, ar, ai);
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(ar[i] == doctest::Approx(er[i]));
            CHECK(ai[i] == doctest::Approx(ei[i]));
        }
    });
}

TEST_CASE("mix_seed avalanches and is order-sensitive") {
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(0, 0) != 0);
    // neighboring indices give unrelated seeds
    const auto a = mix_seed(42, 7);
    const auto b = mix_seed(42, 8);
    int differing_bits = 0;
    for (int bit = 0; bit < 64; ++bit)
        if (((a ^ b) >> bit) & 1) ++differing_bits;
    CHECK(differing_bits > 16);
}
