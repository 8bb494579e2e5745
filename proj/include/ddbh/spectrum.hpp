#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddbh/meanfield.hpp"

namespace ddbh {

using Wavevector = std::vector<double>;

struct DegeneracyError : std::runtime_error {
    DegeneracyError(const std::string& what, std::vector<cplx> c) : std::runtime_error(what), cluster(std::move(c)) {}
    std::vector<cplx> cluster;
};

struct TrackingError : std::runtime_error {
    TrackingError(const std::string& what, int from, int to) : std::runtime_error(what), k_from(from), k_to(to) {}
    int k_from, k_to;
};

/// 2J sum_a cos k_a.
double hopping_cos(const ModelParams& p, const Wavevector& k);

/// Upper-diagonal block of the fluctuation generator at wavevector k (rotating frame in the SFP).
Eigen::MatrixXcd build_A_block(const NessResult& ness, const ModelParams& p, const Wavevector& k);

struct Eigendecomposition {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right;  // unit-norm columns
    Eigen::MatrixXcd left;   // rows: left.row(a) * right.col(b) = delta_ab
    double condition = 1.0;
    bool cluster_fallback = false;
};

/// Condition numbers above this are treated as defective.
inline constexpr double kDefectiveCondition = 1e10;
inline constexpr double kClusterTol = 1e-9;
/// Branch tracking switches to right-vector overlaps above this.
inline constexpr double kNearDefectiveCondition = 1e6;

Eigendecomposition diagonalize(const Eigen::MatrixXcd& A);

struct ModeWeights {
    cplx N = 0.0, U = 0.0, V = 0.0;
    cplx amp = 0.0, phase = 0.0;
    double C = 0.0;
};

ModeWeights channel_weights(const Eigen::VectorXcd& u, const LocalBasis& b);

struct ModeSet {
    Wavevector k;
    Eigen::VectorXcd omega;
    Eigen::MatrixXcd right_u;
    Eigen::MatrixXcd left_x;
    double condition = 1.0;
    std::vector<ModeWeights> weights;
    int trace_mode = -1;  // NESS direction, excluded from branch statistics

    int size() const { return static_cast<int>(omega.size()); }
};

ModeSet mode_set(const NessResult& ness, const ModelParams& p, const Wavevector& k);

/// Mode sets along a path, diagonalized on `workers` threads.
std::vector<ModeSet> mode_sets(const NessResult& ness, const ModelParams& p, const std::vector<Wavevector>& path,
                               int workers = 1);

/// max_a min_b |omega_b + conj(omega_a)|.
double pairing_defect(const Eigen::VectorXcd& omega);

double norm_k(const Wavevector& k);

/// Diagonal cut from k = 0 to (k_max, ..., k_max) with n points (Gamma to M for k_max = pi).
std::vector<Wavevector> diagonal_path(int d, int n, double k_max = 3.14159265358979323846, double k_min = 0.0);

/// Branch assignment along a path: band[label][i] is the mode index carrying `label` at path point i.
struct BranchTable {
    std::map<std::string, std::vector<int>> band;
    int reference = 0;

    std::string label_of(int i, int mode) const;
};

/// Labels at the reference point (smallest |k|, nonzero in the SFP), then overlap tracking.
/// IP: QP, QH, D. SFP: G, A, D. The NESS direction is "trace"; everything else "local".
BranchTable classify_branches(const std::vector<ModeSet>& path, Phase phase, double min_overlap = 0.5);

struct StabilityReport {
    bool stable = true;
    int k_index = -1;
    int mode = -1;
    double max_im = 0.0;
};

StabilityReport stability_check(const std::vector<ModeSet>& sets, double zero_mode_tol);

/// Path indices, contiguous from the reference, where |Re w_G| < 0.1 |Im w_G|.
std::vector<int> diffusive_window(const std::vector<ModeSet>& path, const BranchTable& table);

}  // namespace ddbh
