#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ddbh/lindblad.hpp"
#include "ddbh/observables.hpp"

namespace ddbh {

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Phase { IP, SFP };
const char* phase_name(Phase p);

/// Fixed-step RK4 for i dc/dt = L[c] c, with L rebuilt from psi at every stage.
class Propagator {
public:
    explicit Propagator(const ModelParams& p);

    void step(Eigen::VectorXcd& c, double dt);

    /// Advances by n_steps; calls on_sample(t, c) every sample_every steps.
    void run(Eigen::VectorXcd& c, double dt, long n_steps, long sample_every = 0,
             const std::function<void(long step, const Eigen::VectorXcd&)>& on_sample = {});

    const LocalBasis& basis() const { return basis_; }

private:
    void rhs(const double* xr, const double* xi, double* yr, double* yi);

    struct Entry {
        int row, col;
        double coeff;
    };
    LocalBasis basis_;
    int dim_;
    double z_;
    std::vector<double> l0_re_, l0_im_;
    std::vector<Entry> hop_adag_, hop_a_;  // real coefficients
    std::vector<std::pair<int, double>> psi_terms_;
    std::vector<double> buf_;
};

struct PropagateOptions {
    double dt = 1e-2;
    double t_max = 2e4;
    double tol = 1e-8;
    std::optional<double> window;  // default 10 / Gamma_l
    double sample_dt = 0.05;
    double psi_threshold = 1e-4;
    bool polish = true;
    double polish_trigger = 1e-3;
};

struct NessResult {
    GutzwillerState c0;
    cplx psi0 = 0.0;
    double omega0 = 0.0;
    Phase phase = Phase::IP;
    bool converged = false;
    double residual = 0.0;
    long steps = 0;
    double t_final = 0.0;
    bool polished = false;
};

NessResult propagate_to_ness(const GutzwillerState& init, const ModelParams& p, const PropagateOptions& opts = {});

/// || (L[c] - omega0 K) c ||_2.
double stationary_residual(const GutzwillerState& s, double omega0, const ModelParams& p);

struct PolishResult {
    GutzwillerState c;
    double omega0 = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool ok = false;
};

/// Newton iteration on (L[c] - omega0 K) c = 0 with unit trace; in the SFP also fixes Im psi and solves for omega0.
PolishResult polish_stationary(const GutzwillerState& guess, double omega0, const ModelParams& p, bool sfp);

/// Largest Im of the linearized spectrum at k = 0 and at the zone corner.
double max_growth_rate(const GutzwillerState& c0, double omega0, const ModelParams& p);

GutzwillerState rotating_frame_transform(const GutzwillerState& s, double omega0, double t);

/// omega0 = -(least-squares slope of unwrapped arg psi).
double extract_limit_cycle_frequency(const std::vector<std::pair<double, cplx>>& samples,
                                     double psi_threshold = 1e-4);

/// Closed-form hard-core IP steady state, trace-normalized. The hopping enters only through the
/// cavity-emitter detuning omega_c - omega_at (= zJ for the default omega_at).
GutzwillerState analytic_ip_ness(const ModelParams& p);

/// Estimated critical bandwidth z J_c; none when Gamma_em < Gamma_l.
std::optional<double> critical_hopping_estimate(const ModelParams& p);

/// zJ at which the analytic hard-core IP state first acquires a growing k = 0 or zone-corner mode,
/// bisected to tol inside [zJ_lo, zJ_hi]; none if the bracket does not straddle the threshold.
std::optional<double> ip_instability_threshold(const ModelParams& p, double zJ_lo, double zJ_hi, double tol = 1e-10);

/// Follows a converged NESS through the given zJ values by Newton polishing from the previous point.
/// Entries after the first failed step are left unconverged.
std::vector<NessResult> continue_in_zJ(const NessResult& start, const ModelParams& p, const std::vector<double>& zJ);

struct ScanOptions {
    PropagateOptions prop;
    bool warm_start = true;
    int chain_length = 1;  // consecutive grid points that warm-start from each other
    int workers = 1;
};

struct ScanEntry {
    ModelParams params;
    NessResult ness;
    ObservableSet obs;
    bool warm_started = false;
    std::string error;

    bool ok() const { return error.empty() && ness.converged; }
};

std::vector<ScanEntry> phase_scan(const std::vector<ModelParams>& grid, const ScanOptions& opts);

}  // namespace ddbh
