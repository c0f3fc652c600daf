#pragma once

#include <cstdint>
#include <random>

namespace qchaos {

/// splitmix64 finalizer used to derive child seeds from (stream, index) pairs.
/// Every (grid point, realization) task gets mix_seed(mix_seed(master, point), realization),
/// so results never depend on scheduling order or worker count.
constexpr std::uint64_t mix_seed(std::uint64_t stream, std::uint64_t index) {
    std::uint64_t z = stream + 0x9E3779B97F4A7C15ull * (index + 0x632BE59BD9B4E019ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic uniform stream. Doubles come from the top 53 bits of mt19937_64,
/// not from std::uniform_real_distribution, whose output is implementation-defined;
/// identical seeds therefore give bit-identical draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// uniform in [0, 1)
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// uniform integer in [0, n); Lemire multiply-shift, deterministic
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(gen_()) * n) >> 64);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace qchaos
