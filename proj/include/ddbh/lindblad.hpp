#pragma once

#include <Eigen/Dense>

#include "ddbh/params.hpp"
#include "ddbh/state.hpp"

namespace ddbh {

/// L[c] = L0 + (z psi) Ladag + (z psibar) La, so that i dc/dt = L[c] c.
///
/// Ladag and La carry the hopping coupling to a^dagger and a. For a Hermitian state psibar = conj(psi);
/// the linearization treats psi = U.c and psibar = V.c as independent.
struct SuperoperatorParts {
    LocalBasis basis;
    Eigen::MatrixXcd L0;
    Eigen::MatrixXcd Ladag;
    Eigen::MatrixXcd La;

    Eigen::MatrixXcd assemble(cplx zpsi, cplx zpsibar) const { return L0 + zpsi * Ladag + zpsibar * La; }
};

SuperoperatorParts superoperator_parts(const ModelParams& p);

Eigen::MatrixXcd build_superoperator(const GutzwillerState& s, const ModelParams& p);

/// psi = sum sqrt(n+1) c_{n+1,n,s,s}.
cplx order_parameter(const GutzwillerState& s);

/// Row vectors extracting psi (U-row) and psibar (V-row) from a flat vector.
Eigen::RowVectorXcd u_row(const LocalBasis& b);
Eigen::RowVectorXcd v_row(const LocalBasis& b);

/// Flat vectors of [a^dagger, c], [a, c] and (n - m) c.
Eigen::VectorXcd commutator_adag(const GutzwillerState& s);
Eigen::VectorXcd commutator_a(const GutzwillerState& s);
Eigen::VectorXcd density_vertex(const GutzwillerState& s);

/// Linearized generator around a stationary c0 rotating at omega0:
/// L[c0] - jcos ([a^dagger,c0] U + [a,c0] V) - omega0 K, where jcos = 2 J sum_a cos k_a.
Eigen::MatrixXcd fluctuation_matrix(const GutzwillerState& c0, double omega0, const ModelParams& p, double jcos);

}  // namespace ddbh
