#pragma once

#include <stdexcept>
#include <vector>

#include "ddbh/spectrum.hpp"

namespace ddbh {

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Probe vectors built from the NESS: P0 = [a^dagger, c0], Q0 = [a, c0], N0 = (n - m) c0.
struct PerturbationVectors {
    Eigen::VectorXcd P0, Q0, N0;
};
PerturbationVectors perturbation_vectors(const GutzwillerState& c0);

/// Per-mode residues of one ModeSet.
struct Residues {
    Eigen::VectorXcd Z;     // U_a (x_a . P0)
    Eigen::VectorXcd Zbar;  // V_a (x_a . P0)
    Eigen::VectorXcd Y;     // V_a (y_a . conj P0), y_a the index-transposed x_a
    Eigen::VectorXcd chi;   // N_a (x_a . N0)
};

enum class Channel { Density, Particle };

/// x_a . (N0 or P0) for every mode.
Eigen::VectorXcd perturbation_weights(const ModeSet& m, const PerturbationVectors& v, Channel ch);

Residues residues(const ModeSet& m, const GutzwillerState& c0);

/// sum_a r_a / (w - p_a) over a real frequency grid. Throws PoleError when w hits an undamped pole.
std::vector<cplx> pole_sum(const Eigen::VectorXcd& poles, const Eigen::VectorXcd& r, const std::vector<double>& w);

struct Mirrors {
    cplx eta_L, eta_R;
};
/// eta_L = eta_R = sqrt(Gamma_l).
Mirrors default_mirrors(const ModelParams& p);

/// T = -i eta_L conj(eta_R) G, R = 1 - i |eta_L|^2 G, F = -i eta_L conj(eta_R) Delta.
struct InputOutput {
    cplx T, R, F;
    double violation;  // |T|^2 + |R|^2 - 1
};
InputOutput input_output(cplx G, cplx Delta, const Mirrors& m);

struct ResponseMap {
    std::vector<Wavevector> k;
    std::vector<double> omega;
    Mirrors mirrors;
    // Row-major [k_index * omega.size() + j].
    std::vector<cplx> G, Delta, chi, T, R, F;
    std::vector<double> A, violation;
    std::vector<Residues> residues;
    std::vector<Eigen::VectorXcd> poles;

    int n_omega() const { return static_cast<int>(omega.size()); }
    int at(int ik, int j) const { return ik * n_omega() + j; }
};

ResponseMap response_map(const std::vector<ModeSet>& sets, const GutzwillerState& c0, const std::vector<double>& omega,
                         const Mirrors& mirrors, int workers = 1);

struct DosReport {
    std::vector<double> A_local;
    double integral = 0.0;      // trapezoid over the sampled window
    double window_exact = 0.0;  // the same window integral from the pole expansion
    double expected = 0.0;      // 1 - 2 n0
    double tail_estimate = 0.0; // expected - window_exact
};

/// Local DoS (k-averaged) and its sum rule on the sampled window.
DosReport dos(const ResponseMap& map, double n0);

/// Default grid [center - 10 Gamma_p, center + 10 Gamma_p] with 2001 points.
std::vector<double> default_omega_grid(double center, double Gamma_p, int n = 2001);

}  // namespace ddbh
