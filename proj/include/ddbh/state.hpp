#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddbh/basis.hpp"

namespace ddbh {

using cplx = std::complex<double>;

/// Homogeneous local density matrix, vectorized in LocalBasis flat order.
struct GutzwillerState {
    LocalBasis basis;
    Eigen::VectorXcd c;

    GutzwillerState() : basis(1), c(Eigen::VectorXcd::Zero(16)) {}
    explicit GutzwillerState(const LocalBasis& b) : basis(b), c(Eigen::VectorXcd::Zero(b.dim_rho())) {}
    GutzwillerState(const LocalBasis& b, Eigen::VectorXcd v);

    cplx& at(int n, int m, int s, int sp) { return c[basis.flat_index(n, m, s, sp)]; }
    cplx at(int n, int m, int s, int sp) const { return c[basis.flat_index(n, m, s, sp)]; }
};

enum class ViolationKind { Hermiticity, Trace, NegativeDiagonal };

struct Violation {
    ViolationKind kind;
    ElementIndex where;
    double magnitude;
    std::string message;
};

std::vector<Violation> validate_state(const GutzwillerState& s, double tol);

cplx trace(const GutzwillerState& s);

/// Local density matrix rho_{(n,sigma),(m,sigma')}.
Eigen::MatrixXcd to_matrix(const GutzwillerState& s);
GutzwillerState from_matrix(const LocalBasis& b, const Eigen::MatrixXcd& rho);

/// Replaces c by its Hermitian part.
void hermitize(GutzwillerState& s);

/// Maximally mixed diagonal plus eps on every c_{n+1,n,s,s} and its partner.
GutzwillerState seeded_mixed_state(const LocalBasis& b, double eps = 1e-3);

/// Diagonal of the charge operator n - m + (sigma - sigma')/2 in flat order.
Eigen::VectorXd charge_diagonal(const LocalBasis& b);

}  // namespace ddbh
