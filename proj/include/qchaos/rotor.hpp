#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qchaos/fft.hpp"

// The kicked rotator: classical standard-map ensembles with momentum-inversion
// reversal, and the quantum rotator evolved by the split unitary
//   psi' = exp(-i T n^2/4) exp(-i k cos theta) exp(-i T n^2/4) psi
// with conjugation-based time reversal. hbar = 1 throughout.

namespace qchaos {

struct ClassicalEnsemble {
    std::vector<double> momentum;
    std::vector<double> phase;  // stored in [0, 2*pi)
    double kick = 0.0;          // k
    double period = 0.0;        // T; chaos parameter K = k*T

    double chaos_parameter() const { return kick * period; }
    double energy() const;  // <n^2/2>
};

/// Orbits at n = 0 with phases spread homogeneously over [0, 2*pi).
ClassicalEnsemble make_line_ensemble(std::size_t orbits, double kick, double period);

/// One symplectic iteration n' = n + k sin(theta + T n/2),
/// theta' = theta + T (n + n')/2, phases re-wrapped for storage.
void classical_step(ClassicalEnsemble& ensemble);

struct ClassicalReversalReport {
    std::vector<double> energy_trace;  // E at t = 0 .. 2*t_rev
    int divergence_step = -1;          // reversal steps until median |dtheta| > 1; -1 if never
    double final_energy = 0.0;
    double energy_at_reversal = 0.0;
};

/// Iterate t_rev steps, invert momenta with multiplicative error (1 + perturbation),
/// iterate t_rev more, and compare the return path against the stored forward path.
ClassicalReversalReport classical_reversal_experiment(double chaos_parameter, double kick,
                                                      int t_rev, double perturbation,
                                                      std::size_t orbits = 1000);

class QuantumRotor {
public:
    static constexpr int default_log2_size = 12;

    /// Momentum basis of 2^log2_size states centered on n = 0.
    QuantumRotor(double kick, double period, int log2_size = default_log2_size);

    /// delta state at n = 0
    static QuantumRotor delta_at_zero(double kick, double period,
                                      int log2_size = default_log2_size);

    void step();        // one kick period; throws NumericError on norm drift
    void conjugate();   // psi -> psi*

    double norm_sq() const;
    double energy() const;  // <n^2/2>
    /// probability within `margin` momentum sites of either basis edge
    double edge_probability(int margin = 10) const;

    std::size_t size() const { return size_; }
    long momentum_at(std::size_t bin) const;  // signed momentum of FFT bin
    std::span<const double> re() const { return re_; }
    std::span<const double> im() const { return im_; }
    std::span<double> re() { return re_; }
    std::span<double> im() { return im_; }

private:
    double kick_, period_;
    std::size_t size_;
    Fft fft_;
    std::vector<double> re_, im_;                        // momentum representation
    std::vector<double> mom_re_, mom_im_;                // exp(-i T n^2/4)
    std::vector<double> kick_re_, kick_im_;              // exp(-i k cos theta_j)
};

struct QuantumReversalReport {
    std::vector<double> energy_trace;  // E at t = 0 .. 2*t_rev
    std::vector<double> norm_trace;
    double fidelity = 0.0;             // |<psi0|psi_final>|^2
};

/// t_rev forward steps, conjugate, t_rev more forward steps from the n = 0
/// delta state. The basis-truncation guard aborts if probability reaches the
/// momentum edges.
QuantumReversalReport quantum_reversal_experiment(double kick, double period, int t_rev,
                                                  int log2_size = QuantumRotor::default_log2_size);

}  // namespace qchaos
