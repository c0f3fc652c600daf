#include "qchaos/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qchaos/error.hpp"
#include "qchaos/kernels.hpp"

namespace qchaos {

namespace {

constexpr double two_pi = 2.0 * M_PI;

double wrap_phase(double theta) {
    theta = std::fmod(theta, two_pi);
    return theta < 0.0 ? theta + two_pi : theta;
}

double circular_distance(double a, double b) {
    const double d = std::abs(wrap_phase(a) - wrap_phase(b));
    return std::min(d, two_pi - d);
}

}  // namespace

double ClassicalEnsemble::energy() const {
    double e = 0.0;
    for (double n : momentum) e += n * n;
    return 0.5 * e / static_cast<double>(momentum.size());
}

ClassicalEnsemble make_line_ensemble(std::size_t orbits, double kick, double period) {
    if (orbits == 0) throw std::invalid_argument("make_line_ensemble: need orbits");
    ClassicalEnsemble ens;
    ens.kick = kick;
    ens.period = period;
    ens.momentum.assign(orbits, 0.0);
    ens.phase.resize(orbits);
    for (std::size_t j = 0; j < orbits; ++j)
        ens.phase[j] = two_pi * (static_cast<double>(j) + 0.5) / static_cast<double>(orbits);
    return ens;
}

void classical_step(ClassicalEnsemble& ens) {
    const double k = ens.kick, t = ens.period;
    for (std::size_t i = 0; i < ens.momentum.size(); ++i) {
        const double psi = ens.phase[i] + 0.5 * t * ens.momentum[i];
        const double n_new = ens.momentum[i] + k * std::sin(psi);
        ens.momentum[i] = n_new;
        ens.phase[i] = wrap_phase(psi + 0.5 * t * n_new);
    }
}

ClassicalReversalReport classical_reversal_experiment(double chaos_parameter, double kick,
                                                      int t_rev, double perturbation,
                                                      std::size_t orbits) {
    if (t_rev < 0) throw std::invalid_argument("classical_reversal: t_rev must be >= 0");
    if (kick == 0.0) throw std::invalid_argument("classical_reversal: kick must be nonzero");
    ClassicalEnsemble ens = make_line_ensemble(orbits, kick, chaos_parameter / kick);

    ClassicalReversalReport report;
    report.energy_trace.reserve(2 * t_rev + 1);
    report.energy_trace.push_back(ens.energy());

    // forward leg, remembering the path for the retrace comparison
    std::vector<std::vector<double>> phase_history;
    phase_history.reserve(t_rev + 1);
    phase_history.push_back(ens.phase);
    for (int t = 0; t < t_rev; ++t) {
        classical_step(ens);
        report.energy_trace.push_back(ens.energy());
        phase_history.push_back(ens.phase);
    }
    report.energy_at_reversal = ens.energy();

    for (double& n : ens.momentum) n = -n * (1.0 + perturbation);

    std::vector<double> dist(orbits);
    for (int s = 1; s <= t_rev; ++s) {
        classical_step(ens);
        report.energy_trace.push_back(ens.energy());
        const auto& target = phase_history[static_cast<std::size_t>(t_rev - s)];
        for (std::size_t i = 0; i < orbits; ++i)
            dist[i] = circular_distance(ens.phase[i], target[i]);
        std::nth_element(dist.begin(), dist.begin() + dist.size() / 2, dist.end());
        const double median = dist[dist.size() / 2];
        if (report.divergence_step < 0 && median > 1.0) report.divergence_step = s;
    }
    report.final_energy = ens.energy();
    return report;
}

QuantumRotor::QuantumRotor(double kick, double period, int log2_size)
    : kick_(kick),
      period_(period),
      size_(std::size_t{1} << log2_size),
      fft_(std::size_t{1} << log2_size),
      re_(size_, 0.0),
      im_(size_, 0.0),
      mom_re_(size_),
      mom_im_(size_),
      kick_re_(size_),
      kick_im_(size_) {
    if (log2_size < 3 || log2_size > 24)
        throw std::invalid_argument("QuantumRotor: log2_size out of range");
    for (std::size_t j = 0; j < size_; ++j) {
        const double n = static_cast<double>(momentum_at(j));
        const double a = -period_ * n * n / 4.0;
        mom_re_[j] = std::cos(a);
        mom_im_[j] = std::sin(a);
        const double theta = two_pi * static_cast<double>(j) / static_cast<double>(size_);
        const double b = -kick_ * std::cos(theta);
        kick_re_[j] = std::cos(b);
        kick_im_[j] = std::sin(b);
    }
}

QuantumRotor QuantumRotor::delta_at_zero(double kick, double period, int log2_size) {
    QuantumRotor r(kick, period, log2_size);
    r.re_[0] = 1.0;
    return r;
}

long QuantumRotor::momentum_at(std::size_t bin) const {
    const long half = static_cast<long>(size_ / 2);
    const long b = static_cast<long>(bin);
    return b < half ? b : b - static_cast<long>(size_);
}

void QuantumRotor::step() {
    kernels::complex_mul(re_, im_, mom_re_, mom_im_, re_, im_);
    fft_.inverse(re_, im_);  // momentum -> angle
    kernels::complex_mul(re_, im_, kick_re_, kick_im_, re_, im_);
    fft_.forward(re_, im_);  // angle -> momentum
    kernels::complex_mul(re_, im_, mom_re_, mom_im_, re_, im_);
    const double n = norm_sq();
    if (std::abs(n - 1.0) > 1e-9)
        throw NumericError("QuantumRotor::step: norm drift " + std::to_string(n - 1.0));
}

void QuantumRotor::conjugate() {
    for (double& v : im_) v = -v;
}

double QuantumRotor::norm_sq() const {
    return kernels::sum_squares(re_) + kernels::sum_squares(im_);
}

double QuantumRotor::energy() const {
    double e = 0.0;
    for (std::size_t j = 0; j < size_; ++j) {
        const double n = static_cast<double>(momentum_at(j));
        e += (re_[j] * re_[j] + im_[j] * im_[j]) * n * n;
    }
    return 0.5 * e;
}

double QuantumRotor::edge_probability(int margin) const {
    const long half = static_cast<long>(size_ / 2);
    double p = 0.0;
    for (std::size_t j = 0; j < size_; ++j) {
        const long n = momentum_at(j);
        if (n >= half - margin || n < -half + margin)
            p += re_[j] * re_[j] + im_[j] * im_[j];
    }
    return p;
}

QuantumReversalReport quantum_reversal_experiment(double kick, double period, int t_rev,
                                                  int log2_size) {
    if (t_rev < 0) throw std::invalid_argument("quantum_reversal: t_rev must be >= 0");
    QuantumRotor rotor = QuantumRotor::delta_at_zero(kick, period, log2_size);
    const std::vector<double> re0(rotor.re().begin(), rotor.re().end());
    const std::vector<double> im0(rotor.im().begin(), rotor.im().end());

    QuantumReversalReport report;
    report.energy_trace.reserve(2 * t_rev + 1);
    report.norm_trace.reserve(2 * t_rev + 1);
    report.energy_trace.push_back(rotor.energy());
    report.norm_trace.push_back(rotor.norm_sq());

    auto run_leg = [&](int steps) {
        for (int t = 0; t < steps; ++t) {
            rotor.step();
            if (rotor.edge_probability() > 1e-8)
                throw NumericError(
                    "quantum_reversal: probability reached the momentum-basis edge; "
                    "increase log2_size");
            report.energy_trace.push_back(rotor.energy());
            report.norm_trace.push_back(rotor.norm_sq());
        }
    };
    run_leg(t_rev);
    rotor.conjugate();
    run_leg(t_rev);

    const double ovl_re = kernels::dot(re0, rotor.re()) + kernels::dot(im0, rotor.im());
    const double ovl_im = kernels::dot(re0, rotor.im()) - kernels::dot(im0, rotor.re());
    report.fidelity = ovl_re * ovl_re + ovl_im * ovl_im;
    return report;
}

}  // namespace qchaos
