#include "ddbh/state.hpp"

#include <cmath>
#include <sstream>

namespace ddbh {

GutzwillerState::GutzwillerState(const LocalBasis& b, Eigen::VectorXcd v) : basis(b), c(std::move(v)) {
    if (c.size() != b.dim_rho()) throw IndexError("state vector length does not match basis");
}

cplx trace(const GutzwillerState& s) {
    cplx t = 0.0;
    for (int n = 0; n <= s.basis.n_max(); ++n)
        for (int sg : {-1, 1}) t += s.at(n, n, sg, sg);
    return t;
}

std::vector<Violation> validate_state(const GutzwillerState& s, double tol) {
    std::vector<Violation> out;
    const LocalBasis& b = s.basis;
    for (int i = 0; i < b.dim_rho(); ++i) {
        const ElementIndex e = b.unflatten(i);
        const int j = b.flat_index(e.m, e.n, e.sigma_p, e.sigma);
        if (j < i) continue;
        const double dev = std::abs(s.c[i] - std::conj(s.c[j]));
        if (dev > tol) {
            std::ostringstream msg;
            msg << "c(" << e.n << "," << e.m << "," << e.sigma << "," << e.sigma_p
                << ") differs from conj of its transpose by " << dev;
            out.push_back({ViolationKind::Hermiticity, e, dev, msg.str()});
        }
    }
    const cplx tr = trace(s);
    if (std::abs(tr - 1.0) > tol) {
        std::ostringstream msg;
        msg << "trace " << tr.real() << "+" << tr.imag() << "i differs from 1";
        out.push_back({ViolationKind::Trace, {}, std::abs(tr - 1.0), msg.str()});
    }
    for (int n = 0; n <= b.n_max(); ++n) {
        for (int sg : {-1, 1}) {
            const double re = s.at(n, n, sg, sg).real();
            if (re < -tol) {
                std::ostringstream msg;
                msg << "diagonal (" << n << "," << sg << ") is negative: " << re;
                out.push_back({ViolationKind::NegativeDiagonal, {n, n, sg, sg}, -re, msg.str()});
            }
        }
    }
    return out;
}

Eigen::MatrixXcd to_matrix(const GutzwillerState& s) {
    const LocalBasis& b = s.basis;
    Eigen::MatrixXcd rho(b.local_dim(), b.local_dim());
    for (int i = 0; i < b.dim_rho(); ++i) {
        const ElementIndex e = b.unflatten(i);
        rho(b.local_index(e.n, e.sigma), b.local_index(e.m, e.sigma_p)) = s.c[i];
    }
    return rho;
}

GutzwillerState from_matrix(const LocalBasis& b, const Eigen::MatrixXcd& rho) {
    GutzwillerState s(b);
    for (int i = 0; i < b.dim_rho(); ++i) {
        const ElementIndex e = b.unflatten(i);
        s.c[i] = rho(b.local_index(e.n, e.sigma), b.local_index(e.m, e.sigma_p));
    }
    return s;
}

void hermitize(GutzwillerState& s) {
    const Eigen::MatrixXcd rho = to_matrix(s);
    s = from_matrix(s.basis, 0.5 * (rho + rho.adjoint()));
}

GutzwillerState seeded_mixed_state(const LocalBasis& b, double eps) {
    GutzwillerState s(b);
    const double p = 1.0 / b.local_dim();
    for (int n = 0; n <= b.n_max(); ++n)
        for (int sg : {-1, 1}) s.at(n, n, sg, sg) = p;
    for (int n = 0; n < b.n_max(); ++n) {
        for (int sg : {-1, 1}) {
            s.at(n + 1, n, sg, sg) = eps;
            s.at(n, n + 1, sg, sg) = eps;
        }
    }
    return s;
}

Eigen::VectorXd charge_diagonal(const LocalBasis& b) {
    Eigen::VectorXd k(b.dim_rho());
    for (int i = 0; i < b.dim_rho(); ++i) k[i] = b.charge(i);
    return k;
}

}  // namespace ddbh
