#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

// Hamiltonian construction: the qubit-register model with random splittings and
// residual sigma^x sigma^x couplings, its spin-glass-shard variant, the two-body
// random interaction model (TBRIM) for n fermions on m orbitals, and the
// three-particle layer model used for the second-order coupling estimate.
//
// All disorder comes from a seeded stream in a fixed, documented order, so
// identical parameters + seed give bit-identical matrices.

namespace qchaos {

enum class Topology {
    torus_nearest_neighbor,  // 2d lattice, periodic boundaries
    complete_graph,          // every pair coupled
    star,                    // site 0 coupled to all others (spin-glass shard)
};

struct LatticeSpec {
    int rows = 1;
    int cols = 1;
    Topology topology = Topology::torus_nearest_neighbor;
    std::vector<std::pair<int, int>> edges;  // unordered pairs i<j, lexicographic

    int sites() const { return rows * cols; }
};

/// Deduplicated edge list for the requested topology. Periodic wrap on side
/// length <= 2 would produce parallel edges; each pair is kept once. Self-edges
/// from 1-wide sides are dropped.
LatticeSpec build_lattice(int rows, int cols, Topology topology);

/// rows x cols factorization of n with rows the largest divisor <= sqrt(n).
LatticeSpec default_lattice(int sites, Topology topology = Topology::torus_nearest_neighbor);

struct SgqcParams {
    int qubits = 1;
    double delta0 = 1.0;    // mean one-qubit level spacing
    double delta = 0.0;     // detuning width: Gamma_i ~ U[delta0 - delta/2, delta0 + delta/2]
    double coupling = 0.0;  // J: J_ij ~ U[-J, J] on each lattice edge
    LatticeSpec lattice;
    std::uint64_t seed = 0;
};

SgqcParams sgqc_params(int qubits, double delta0, double delta, double coupling,
                       std::uint64_t seed);

/// Spin-glass shard preset: star lattice and Gamma_i ~ U[0, 2*delta0].
SgqcParams shard_params(int qubits, double delta0, double coupling, std::uint64_t seed);

struct Hamiltonian {
    struct OffDiagEntry {
        std::uint32_t row, col;  // row < col; the (col,row) mirror is implied
        double value;
    };

    std::size_t dim = 0;
    int sites = 0;                       // qubit count n or orbital count m
    std::vector<std::uint64_t> labels;   // basis bitmasks (qubit pattern / occupied orbitals)
    std::vector<double> diagonal;
    std::vector<OffDiagEntry> offdiag;
    std::string sector;                  // "", "parity=even", "band k=3", ...

    void apply(std::span<const double> x, std::span<double> y) const;  // y = H x
    std::vector<double> dense() const;                                 // column-major
    std::size_t offdiag_row_count(std::size_t row) const;
};

/// 2^n x 2^n register-basis matrix of the qubit Hamiltonian
///   H = sum_i Gamma_i sigma_i^z + sum_edges J_ij sigma_i^x sigma_j^x,
/// with sigma^z|0> = +|0>. Draw order: all Gamma_i in site order, then all J_ij
/// in edge order.
Hamiltonian build_sgqc(const SgqcParams& p, int qubit_cap = 20);

/// Exact block diagonalization by parity of the number of up qubits.
/// Returns (even, odd); throws NumericError if a coupling crosses sectors.
std::pair<Hamiltonian, Hamiltonian> parity_sectors(const Hamiltonian& h);

/// Projection onto the band of states with exactly k qubits up: keeps couplings
/// that flip one up and one down qubit, drops band-leaving ones.
Hamiltonian project_band(const Hamiltonian& h, int k);

/// Band index with the highest density of states: n/2 for even n; for odd n the
/// band centered at E = -delta0, i.e. k = (n+1)/2.
int central_band(int qubits);

struct TbrimParams {
    int orbitals = 2;      // m
    int particles = 1;     // n < m
    double spacing = 1.0;  // Delta: orbital energies sorted from U[0, m*Delta]
    double strength = 0.0; // U: two-body elements ~ U[-U, U]
    std::uint64_t seed = 0;
};

/// n-fermion basis (all n-subsets of m orbitals, lexicographic) with random
/// two-body interaction. One independent element per unordered orbital-pair ->
/// orbital-pair transition, reused consistently; fermionic signs follow the
/// standard sorted-occupation convention. Draw order: orbital energies, then
/// pair-pair elements in lexicographic pair order.
Hamiltonian build_tbrim(const TbrimParams& p, std::size_t dim_cap = 20000);

/// K = 1 + n(m-n) + n(n-1)(m-n)(m-n-1)/4, the number of states reachable from a
/// given determinant by moving at most two particles (including staying put).
std::uint64_t count_directly_coupled(int m, int n);

std::uint64_t binomial(int n, int k);

struct ThreeParticleCoupling {
    double value = 0.0;
    int excluded_terms = 0;  // intermediate states skipped for exactly zero detuning
};

/// Second-order sum  sum_q u_first[q] * u_second[q] / detuning[q], skipping
/// exact-zero denominators (counted in excluded_terms).
ThreeParticleCoupling second_order_coupling(std::span<const double> u_first,
                                            std::span<const double> u_second,
                                            std::span<const double> detuning);

/// Effective coupling between three-particle states |p1 p2 p3> -> |p1' p2' p3'>
/// mediated by U12 then U23, summed over the intermediate level of particle 2.
/// Each particle lives on its own m-level ladder with spacing Delta plus 10%
/// jitter; U12/U23 elements are uniform in [-strength, strength], U13 = 0.
ThreeParticleCoupling effective_three_particle_coupling(int m, double spacing,
                                                        double strength,
                                                        std::uint64_t seed,
                                                        const std::array<int, 3>& state_in,
                                                        const std::array<int, 3>& state_out);

}  // namespace qchaos
