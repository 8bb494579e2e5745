#include "ddbh/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace ddbh {

bool HardCoreParams::in_domain() const {
    return omega_c >= -z * (J + Ubar) && omega_c <= z * J;
}

void HardCoreParams::validate() const {
    if (z < 2 || z % 2 != 0) throw std::invalid_argument("z must be even and >= 2");
    if (!(J > 0.0)) throw std::invalid_argument("J must be > 0");
    if (!in_domain())
        throw DomainError("omega_c = " + std::to_string(omega_c) + " outside [-z(J+Ubar), zJ]");
}

HardCoreMeanField hc_meanfield(const HardCoreParams& p) {
    p.validate();
    const double z = p.z;
    HardCoreMeanField m;
    m.n0 = (z * p.J - p.omega_c) / (z * (2.0 * p.J + p.Ubar));
    m.psi0_sq = m.n0 * (1.0 - m.n0);
    m.omega_eq = z * p.J * (2.0 * m.n0 - 1.0) + z * p.Ubar * m.n0 + p.omega_c;
    m.energy_density = -z * p.J * m.psi0_sq + 0.5 * z * p.Ubar * m.n0 * m.n0 + p.omega_c * m.n0;
    m.xi = m.n0 > 0.0 ? std::numbers::pi / (2.0 * std::asin(std::sqrt(m.n0)))
                      : std::numeric_limits<double>::infinity();
    return m;
}

double hc_epsilon(const HardCoreParams& p, const std::vector<double>& k) {
    double s = 0.0;
    for (double ka : k) s += std::pow(std::sin(0.5 * ka), 2);
    return 4.0 * p.J * s;
}

namespace {

double ubar_k(const HardCoreParams& p, const std::vector<double>& k) {
    double s = 0.0;
    for (double ka : k) s += std::cos(ka);
    return 2.0 * p.Ubar * s;
}

void check_k(const HardCoreParams& p, const std::vector<double>& k) {
    if (static_cast<int>(k.size()) != p.d()) throw std::invalid_argument("wavevector needs z/2 components");
}

}  // namespace

Eigen::Matrix3d hc_bdg_matrix(const HardCoreParams& p, const std::vector<double>& k) {
    check_k(p, k);
    const HardCoreMeanField m = hc_meanfield(p);
    const double eps = hc_epsilon(p, k);
    const double g = (2.0 * p.z * p.J + ubar_k(p, k)) * m.n0;
    const double h = 1.0 - 2.0 * m.n0;
    Eigen::Matrix3d M;
    M << h * eps, 0.0, g,
         0.0, -h * eps, -g,
         (1.0 - m.n0) * eps, -(1.0 - m.n0) * eps, 0.0;
    return M;
}

Eigen::Vector3cd hc_bdg(const HardCoreParams& p, const std::vector<double>& k) {
    Eigen::EigenSolver<Eigen::Matrix3d> es(hc_bdg_matrix(p, k), false);
    return es.eigenvalues();
}

double hc_goldstone(const HardCoreParams& p, const std::vector<double>& k) {
    check_k(p, k);
    const HardCoreMeanField m = hc_meanfield(p);
    const double eps = hc_epsilon(p, k);
    const double h = 1.0 - 2.0 * m.n0;
    const double w2 = h * h * eps * eps + 2.0 * m.psi0_sq * (2.0 * p.z * p.J + ubar_k(p, k)) * eps;
    if (w2 < 0.0) throw DomainError("imaginary Goldstone frequency");
    return std::sqrt(w2);
}

double sound_velocity(const HardCoreParams& p) {
    const HardCoreMeanField m = hc_meanfield(p);
    const double c2 = 2.0 * p.z * p.J * (2.0 * p.J + p.Ubar) * m.psi0_sq;
    if (c2 < 0.0) throw DomainError("imaginary sound velocity");
    return std::sqrt(c2);
}

}  // namespace ddbh
