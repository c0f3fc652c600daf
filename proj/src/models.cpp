#include "qchaos/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "qchaos/error.hpp"
#include "qchaos/rng.hpp"

namespace qchaos {

namespace {

std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

/// mask of bits strictly between a and b (a != b)
std::uint64_t between_mask(int a, int b) {
    if (a > b) std::swap(a, b);
    if (b - a < 2) return 0;
    return (bit(b) - 1) & ~(bit(a + 1) - 1);
}

int position_in(std::uint64_t occupied, int orb) {
    return std::popcount(occupied & (bit(orb) - 1));
}

}  // namespace

LatticeSpec build_lattice(int rows, int cols, Topology topology) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("build_lattice: rows and cols must be positive");
    LatticeSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.topology = topology;
    const int n = rows * cols;
    std::set<std::pair<int, int>> edges;
    auto add = [&edges](int a, int b) {
        if (a == b) return;  // periodic wrap on a 1-wide side
        if (a > b) std::swap(a, b);
        edges.emplace(a, b);
    };
    switch (topology) {
        case Topology::torus_nearest_neighbor:
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) {
                    const int site = r * cols + c;
                    add(site, r * cols + (c + 1) % cols);
                    add(site, ((r + 1) % rows) * cols + c);
                }
            break;
        case Topology::complete_graph:
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) edges.emplace(a, b);
            break;
        case Topology::star:
            for (int b = 1; b < n; ++b) edges.emplace(0, b);
            break;
    }
    spec.edges.assign(edges.begin(), edges.end());
    return spec;
}

LatticeSpec default_lattice(int sites, Topology topology) {
    if (sites < 1) throw std::invalid_argument("default_lattice: need at least one site");
    if (topology != Topology::torus_nearest_neighbor)
        return build_lattice(1, sites, topology);
    int rows = 1;
    for (int d = 1; d * d <= sites; ++d)
        if (sites % d == 0) rows = d;
    return build_lattice(rows, sites / rows, topology);
}

SgqcParams sgqc_params(int qubits, double delta0, double delta, double coupling,
                       std::uint64_t seed) {
    SgqcParams p;
    p.qubits = qubits;
    p.delta0 = delta0;
    p.delta = delta;
    p.coupling = coupling;
    p.lattice = default_lattice(qubits);
    p.seed = seed;
    return p;
}

SgqcParams shard_params(int qubits, double delta0, double coupling, std::uint64_t seed) {
    SgqcParams p;
    p.qubits = qubits;
    p.delta0 = delta0;
    p.delta = 2.0 * delta0;  // Gamma_i ~ U[0, 2*delta0]
    p.coupling = coupling;
    p.lattice = default_lattice(qubits, Topology::star);
    p.seed = seed;
    return p;
}

void Hamiltonian::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != dim || y.size() != dim)
        throw std::invalid_argument("Hamiltonian::apply: size mismatch");
    for (std::size_t i = 0; i < dim; ++i) y[i] = diagonal[i] * x[i];
    for (const auto& e : offdiag) {
        y[e.row] += e.value * x[e.col];
        y[e.col] += e.value * x[e.row];
    }
}

std::vector<double> Hamiltonian::dense() const {
    std::vector<double> a(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) a[i * dim + i] = diagonal[i];
    for (const auto& e : offdiag) {
        a[static_cast<std::size_t>(e.col) * dim + e.row] = e.value;
        a[static_cast<std::size_t>(e.row) * dim + e.col] = e.value;
    }
    return a;
}

std::size_t Hamiltonian::offdiag_row_count(std::size_t row) const {
    std::size_t count = 0;
    for (const auto& e : offdiag)
        if ((e.row == row || e.col == row) && e.value != 0.0) ++count;
    return count;
}

Hamiltonian build_sgqc(const SgqcParams& p, int qubit_cap) {
    if (p.qubits < 1) throw std::invalid_argument("build_sgqc: need at least one qubit");
    if (p.qubits > qubit_cap)
        throw CapacityError("build_sgqc: " + std::to_string(p.qubits) +
                            " qubits exceeds cap " + std::to_string(qubit_cap));
    if (p.lattice.sites() != p.qubits)
        throw std::invalid_argument("build_sgqc: lattice site count != qubit count");
    if (p.delta0 <= 0.0) throw std::invalid_argument("build_sgqc: delta0 must be positive");
    const double delta_max =
        p.lattice.topology == Topology::torus_nearest_neighbor ? p.delta0 : 2.0 * p.delta0;
    if (p.delta < 0.0 || p.delta > delta_max + 1e-12 * p.delta0)
        throw std::invalid_argument("build_sgqc: detuning width out of range");
    if (p.coupling < 0.0) throw std::invalid_argument("build_sgqc: coupling must be >= 0");

    const int n = p.qubits;
    const std::size_t dim = std::size_t{1} << n;

    Rng rng(p.seed);
    std::vector<double> gamma(n);
    for (int i = 0; i < n; ++i)
        gamma[i] = rng.uniform(p.delta0 - 0.5 * p.delta, p.delta0 + 0.5 * p.delta);
    std::vector<double> j_edge(p.lattice.edges.size());
    for (std::size_t e = 0; e < j_edge.size(); ++e)
        j_edge[e] = rng.uniform(-p.coupling, p.coupling);

    Hamiltonian h;
    h.dim = dim;
    h.sites = n;
    h.labels.resize(dim);
    h.diagonal.resize(dim);
    for (std::size_t b = 0; b < dim; ++b) {
        h.labels[b] = b;
        double e = 0.0;
        for (int i = 0; i < n; ++i) e += (b & bit(i)) ? -gamma[i] : gamma[i];
        h.diagonal[b] = e;
    }
    h.offdiag.reserve(dim / 2 * p.lattice.edges.size());
    for (std::size_t b = 0; b < dim; ++b) {
        for (std::size_t e = 0; e < p.lattice.edges.size(); ++e) {
            if (j_edge[e] == 0.0) continue;
            const auto [i, j] = p.lattice.edges[e];
            const std::size_t partner = b ^ bit(i) ^ bit(j);
            if (partner > b)
                h.offdiag.push_back({static_cast<std::uint32_t>(b),
                                     static_cast<std::uint32_t>(partner), j_edge[e]});
        }
    }
    return h;
}

namespace {

Hamiltonian subspace(const Hamiltonian& h, const std::vector<std::uint32_t>& keep,
                     std::string sector_tag) {
    std::vector<std::uint32_t> new_index(h.dim, UINT32_MAX);
    Hamiltonian out;
    out.dim = keep.size();
    out.sites = h.sites;
    out.sector = std::move(sector_tag);
    out.labels.reserve(keep.size());
    out.diagonal.reserve(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        new_index[keep[k]] = static_cast<std::uint32_t>(k);
        out.labels.push_back(h.labels[keep[k]]);
        out.diagonal.push_back(h.diagonal[keep[k]]);
    }
    for (const auto& e : h.offdiag) {
        const std::uint32_t r = new_index[e.row];
        const std::uint32_t c = new_index[e.col];
        if (r != UINT32_MAX && c != UINT32_MAX)
            out.offdiag.push_back({std::min(r, c), std::max(r, c), e.value});
    }
    return out;
}

}  // namespace

std::pair<Hamiltonian, Hamiltonian> parity_sectors(const Hamiltonian& h) {
    for (const auto& e : h.offdiag) {
        const int pr = std::popcount(h.labels[e.row]) & 1;
        const int pc = std::popcount(h.labels[e.col]) & 1;
        if (pr != pc && e.value != 0.0)
            throw NumericError("parity_sectors: coupling crosses parity sectors");
    }
    std::vector<std::uint32_t> even, odd;
    for (std::size_t i = 0; i < h.dim; ++i)
        ((std::popcount(h.labels[i]) & 1) ? odd : even).push_back(
            static_cast<std::uint32_t>(i));
    return {subspace(h, even, "parity=even"), subspace(h, odd, "parity=odd")};
}

Hamiltonian project_band(const Hamiltonian& h, int k) {
    if (k < 0 || k > h.sites)
        throw std::out_of_range("project_band: band index out of range");
    std::vector<std::uint32_t> keep;
    for (std::size_t i = 0; i < h.dim; ++i)
        if (std::popcount(h.labels[i]) == k) keep.push_back(static_cast<std::uint32_t>(i));
    return subspace(h, keep, "band k=" + std::to_string(k));
}

int central_band(int qubits) {
    return (qubits % 2 == 0) ? qubits / 2 : (qubits + 1) / 2;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

std::uint64_t count_directly_coupled(int m, int n) {
    if (n <= 0 || n >= m)
        throw std::invalid_argument("count_directly_coupled: need 0 < n < m");
    const std::uint64_t um = m, un = n;
    return 1 + un * (um - un) + un * (un - 1) * (um - un) * (um - un - 1) / 4;
}

Hamiltonian build_tbrim(const TbrimParams& p, std::size_t dim_cap) {
    const int m = p.orbitals, n = p.particles;
    if (n < 1 || m < 2 || n >= m)
        throw std::invalid_argument("build_tbrim: need 1 <= n < m");
    if (m > 63) throw std::invalid_argument("build_tbrim: orbital count limited to 63");
    if (p.spacing <= 0.0) throw std::invalid_argument("build_tbrim: spacing must be positive");
    if (p.strength < 0.0) throw std::invalid_argument("build_tbrim: strength must be >= 0");
    const std::uint64_t dim64 = binomial(m, n);
    if (dim64 > dim_cap)
        throw CapacityError("build_tbrim: basis size " + std::to_string(dim64) +
                            " exceeds cap " + std::to_string(dim_cap));
    const std::size_t dim = static_cast<std::size_t>(dim64);

    // orbital energies first, then pair-pair elements, from one seeded stream
    Rng rng(p.seed);
    std::vector<double> eps(m);
    for (int i = 0; i < m; ++i) eps[i] = rng.uniform(0.0, m * p.spacing);
    std::sort(eps.begin(), eps.end());

    const int np = m * (m - 1) / 2;
    std::vector<int> pair_index(static_cast<std::size_t>(m) * m, -1);
    {
        int idx = 0;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) pair_index[a * m + b] = idx++;
    }
    auto pidx = [&](int a, int b) {
        return pair_index[std::min(a, b) * m + std::max(a, b)];
    };
    // packed upper triangle of the symmetric pair-pair element table
    std::vector<double> elem(static_cast<std::size_t>(np) * (np + 1) / 2);
    for (std::size_t i = 0; i < elem.size(); ++i)
        elem[i] = rng.uniform(-p.strength, p.strength);
    auto element = [&](int pa, int pb) -> double {
        if (pa > pb) std::swap(pa, pb);
        const std::size_t row_start =
            static_cast<std::size_t>(pa) * np - static_cast<std::size_t>(pa) * (pa - 1) / 2;
        return elem[row_start + (pb - pa)];
    };

    // basis: n-subsets in lexicographic order of the sorted occupation tuples
    std::vector<std::uint64_t> basis;
    basis.reserve(dim);
    std::vector<int> occ(n);
    for (int i = 0; i < n; ++i) occ[i] = i;
    while (true) {
        std::uint64_t mask = 0;
        for (int v : occ) mask |= bit(v);
        basis.push_back(mask);
        int i = n - 1;
        while (i >= 0 && occ[i] == m - n + i) --i;
        if (i < 0) break;
        ++occ[i];
        for (int j = i + 1; j < n; ++j) occ[j] = occ[j - 1] + 1;
    }
    std::unordered_map<std::uint64_t, std::uint32_t> index_of;
    index_of.reserve(dim * 2);
    for (std::size_t i = 0; i < dim; ++i) index_of.emplace(basis[i], i);

    Hamiltonian h;
    h.dim = dim;
    h.sites = m;
    h.labels = basis;
    h.diagonal.resize(dim);
    h.offdiag.reserve(dim * (static_cast<std::size_t>(count_directly_coupled(m, n)) - 1) / 2);

    std::vector<int> occupied, empty;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::uint64_t mask = basis[i];
        occupied.clear();
        empty.clear();
        for (int o = 0; o < m; ++o) ((mask & bit(o)) ? occupied : empty).push_back(o);

        double diag = 0.0;
        for (int o : occupied) diag += eps[o];
        for (std::size_t a = 0; a < occupied.size(); ++a)
            for (std::size_t b = a + 1; b < occupied.size(); ++b) {
                const int pq = pidx(occupied[a], occupied[b]);
                diag += element(pq, pq);
            }
        h.diagonal[i] = diag;

        // single moves a -> b with all spectators r
        for (int a : occupied)
            for (int b : empty) {
                const std::uint64_t tgt = mask ^ bit(a) ^ bit(b);
                const auto it = index_of.find(tgt);
                const std::uint32_t j = it->second;
                if (j <= i) continue;
                double val = 0.0;
                for (int r : occupied) {
                    if (r == a) continue;
                    val += element(pidx(a, r), pidx(b, r));
                }
                const int crossings = std::popcount((mask & ~bit(a)) & between_mask(a, b));
                if (crossings & 1) val = -val;
                if (val != 0.0)
                    h.offdiag.push_back({static_cast<std::uint32_t>(i), j, val});
            }

        // double moves {a1,a2} -> {b1,b2}
        for (std::size_t ai = 0; ai < occupied.size(); ++ai)
            for (std::size_t aj = ai + 1; aj < occupied.size(); ++aj)
                for (std::size_t bi = 0; bi < empty.size(); ++bi)
                    for (std::size_t bj = bi + 1; bj < empty.size(); ++bj) {
                        const int a1 = occupied[ai], a2 = occupied[aj];
                        const int b1 = empty[bi], b2 = empty[bj];
                        const std::uint64_t tgt = mask ^ bit(a1) ^ bit(a2) ^ bit(b1) ^ bit(b2);
                        const std::uint32_t j = index_of.find(tgt)->second;
                        if (j <= i) continue;
                        double val = element(pidx(a1, a2), pidx(b1, b2));
                        // Slater-Condon phase from sorted-occupation positions
                        const int phase = position_in(mask, a1) + position_in(mask, a2) +
                                          position_in(tgt, b1) + position_in(tgt, b2);
                        if (phase & 1) val = -val;
                        if (val != 0.0)
                            h.offdiag.push_back({static_cast<std::uint32_t>(i), j, val});
                    }
    }
    return h;
}

ThreeParticleCoupling second_order_coupling(std::span<const double> u_first,
                                            std::span<const double> u_second,
                                            std::span<const double> detuning) {
    if (u_first.size() != u_second.size() || u_first.size() != detuning.size())
        throw std::invalid_argument("second_order_coupling: size mismatch");
    ThreeParticleCoupling out;
    for (std::size_t q = 0; q < detuning.size(); ++q) {
        if (detuning[q] == 0.0) {
            ++out.excluded_terms;
            continue;
        }
        out.value += u_first[q] * u_second[q] / detuning[q];
    }
    return out;
}

ThreeParticleCoupling effective_three_particle_coupling(int m, double spacing,
                                                        double strength,
                                                        std::uint64_t seed,
                                                        const std::array<int, 3>& state_in,
                                                        const std::array<int, 3>& state_out) {
    if (m < 1) throw std::invalid_argument("three_particle_coupling: m must be >= 1");
    for (int p = 0; p < 3; ++p)
        if (state_in[p] < 0 || state_in[p] >= m || state_out[p] < 0 || state_out[p] >= m)
            throw std::out_of_range("three_particle_coupling: level index out of range");

    // ladder energies: particle 1 levels, then 2, then 3; spacing plus 10% jitter
    Rng rng(seed);
    std::array<std::vector<double>, 3> level;
    for (int p = 0; p < 3; ++p) {
        level[p].resize(m);
        for (int q = 0; q < m; ++q)
            level[p][q] = q * spacing + 0.1 * spacing * rng.uniform(-1.0, 1.0);
    }

    // interaction elements are counter-based draws keyed by (pair tag, indices),
    // independent of evaluation order
    auto draw = [&](std::uint64_t tag, int a, int b, int c, int d) {
        const std::uint64_t key =
            ((static_cast<std::uint64_t>(a) * m + b) * m + c) * m + d;
        Rng local(mix_seed(mix_seed(seed, tag), key));
        return local.uniform(-strength, strength);
    };

    const auto [p1, p2, p3] = state_in;
    const auto [q1, q2, q3] = state_out;
    const double e_in = level[0][p1] + level[1][p2] + level[2][p3];

    std::vector<double> u12(m), u23(m), det(m);
    for (int q = 0; q < m; ++q) {
        u12[q] = draw(0x12, p1, p2, q1, q);   // <p1 p2|U12|q1 qbar>
        u23[q] = draw(0x23, q, p3, q2, q3);   // <qbar p3|U23|q2 q3>
        det[q] = e_in - level[0][q1] - level[1][q] - level[2][p3];
    }
    return second_order_coupling(u12, u23, det);
}

}  // namespace qchaos
