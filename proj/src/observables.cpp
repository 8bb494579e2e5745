#include "ddbh/observables.hpp"

#include <cmath>
#include <string>

#include "ddbh/lindblad.hpp"

namespace ddbh {

ObservableSet observables(const GutzwillerState& s, double tol) {
    const LocalBasis& b = s.basis;
    ObservableSet o;
    double n2 = 0.0;
    for (int n = 0; n <= b.n_max(); ++n) {
        for (int sg : {-1, 1}) {
            const double p = s.at(n, n, sg, sg).real();
            o.n0 += n * p;
            n2 += double(n) * n * p;
            o.Sz += 0.5 * sg * p;
        }
        o.Sminus += 0.5 * s.at(n, n, 1, -1);
    }
    o.dn2 = n2 - o.n0 * o.n0;
    o.purity = s.c.squaredNorm();
    o.rho_c = std::norm(order_parameter(s));

    const Eigen::MatrixXcd rho = to_matrix(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()[i];
        if (lam < -tol) throw PositivityError("density matrix eigenvalue " + std::to_string(lam) + " is negative");
        if (lam < 0.0 && lam >= -1e-12) lam = 0.0;
        if (lam > 0.0) o.entropy -= lam * std::log(lam);
    }
    return o;
}

}  // namespace ddbh
