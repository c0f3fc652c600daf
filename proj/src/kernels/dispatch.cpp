#include "qchaos/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace qchaos::kernels {
namespace {

using detail::Ops;

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool avx2_usable() {
    return detail::avx2_ops.sum != nullptr && cpu_has_avx2();
}

Backend initial_backend() {
    if (const char* env = std::getenv("QCHAOS_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_usable()) return Backend::avx2;
    }
    return avx2_usable() ? Backend::avx2 : Backend::scalar;
}

struct State {
    std::atomic<const Ops*> ops;
    std::atomic<Backend> backend;
    State() {
        const Backend b = initial_backend();
        backend.store(b);
        ops.store(b == Backend::avx2 ? &detail::avx2_ops : &detail::scalar_ops);
    }
};

State& state() {
    static State s;
    return s;
}

const Ops& ops() { return *state().ops.load(std::memory_order_relaxed); }

}  // namespace

Backend active_backend() { return state().backend.load(std::memory_order_relaxed); }

bool backend_available(Backend b) {
    return b == Backend::scalar || (b == Backend::avx2 && avx2_usable());
}

bool set_backend(Backend b) {
    if (!backend_available(b)) return false;
    state().backend.store(b);
    state().ops.store(b == Backend::avx2 ? &detail::avx2_ops : &detail::scalar_ops);
    return true;
}

std::string_view backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum(std::span<const double> x) { return ops().sum(x.data(), x.size()); }

double sum_squares(std::span<const double> x) {
    return ops().sum_squares(x.data(), x.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
    return ops().dot(x.data(), y.data(), x.size());
}

void squares(std::span<const double> x, std::span<double> out) {
    ops().squares(x.data(), out.data(), x.size());
}

void abs_squares(std::span<const double> re, std::span<const double> im,
                 std::span<double> out) {
    ops().abs_squares(re.data(), im.data(), out.data(), re.size());
}

double entropy_bits(std::span<const double> w) {
    return ops().entropy_bits(w.data(), w.size());
}

void complex_mul(std::span<const double> a_re, std::span<const double> a_im,
                 std::span<const double> b_re, std::span<const double> b_im,
                 std::span<double> out_re, std::span<double> out_im) {
    ops().complex_mul(a_re.data(), a_im.data(), b_re.data(), b_im.data(),
                      out_re.data(), out_im.data(), a_re.size());
}

void axpy2(double a, double b, std::span<const double> x, std::span<double> y_re,
           std::span<double> y_im) {
    ops().axpy2(a, b, x.data(), y_re.data(), y_im.data(), x.size());
}

}  // namespace qchaos::kernels
