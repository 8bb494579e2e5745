#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace ddbh {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Equilibrium hard-core bosons with nearest-neighbour interaction Ubar.
struct HardCoreParams {
    double J = 1.0;
    double Ubar = 0.0;
    double omega_c = 0.0;
    int z = 4;

    int d() const { return z / 2; }
    bool in_domain() const;
    void validate() const;
};

struct HardCoreMeanField {
    double n0, psi0_sq, omega_eq, energy_density, xi;
};

HardCoreMeanField hc_meanfield(const HardCoreParams& p);

/// 4J sum_a sin^2(k_a/2).
double hc_epsilon(const HardCoreParams& p, const std::vector<double>& k);

Eigen::Matrix3d hc_bdg_matrix(const HardCoreParams& p, const std::vector<double>& k);
Eigen::Vector3cd hc_bdg(const HardCoreParams& p, const std::vector<double>& k);

double hc_goldstone(const HardCoreParams& p, const std::vector<double>& k);
double sound_velocity(const HardCoreParams& p);

}  // namespace ddbh
