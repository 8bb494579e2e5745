#include "ddbh/lindblad.hpp"

#include <cmath>

namespace ddbh {

namespace {

constexpr cplx I{0.0, 1.0};

struct Builder {
    const LocalBasis& b;
    Eigen::MatrixXcd& M;
    int row;

    void add(int n, int m, int s, int sp, cplx v) {
        if (n < 0 || m < 0 || n > b.n_max() || m > b.n_max()) return;
        M(row, b.flat_index(n, m, s, sp)) += v;
    }
};

}  // namespace

SuperoperatorParts superoperator_parts(const ModelParams& p) {
    p.validate();
    const LocalBasis b = p.basis();
    const int D = b.dim_rho();
    SuperoperatorParts out{b, Eigen::MatrixXcd::Zero(D, D), Eigen::MatrixXcd::Zero(D, D),
                           Eigen::MatrixXcd::Zero(D, D)};
    const double U = p.interaction();
    const double wat = p.omega_at_value();

    for (int r = 0; r < D; ++r) {
        const ElementIndex e = b.unflatten(r);
        const int n = e.n, m = e.m, s = e.sigma, sp = e.sigma_p;
        Builder L0{b, out.L0, r};
        Builder Lad{b, out.Ladag, r};
        Builder La{b, out.La, r};

        const double energy = p.omega_c * (n - m) + U * (n * (n - 1.0) - m * (m - 1.0)) + wat * (s - sp) / 2.0;
        const double decay = p.Gamma_l * (n + m) / 2.0 + p.gamma * (2.0 + s + sp) / 4.0 +
                             p.Gamma_p * (2.0 - s - sp) / 4.0;
        L0.add(n, m, s, sp, energy - I * decay);

        // Hopping, coefficient of z psi and of z psibar.
        Lad.add(n - 1, m, s, sp, -p.J * std::sqrt(double(n)));
        Lad.add(n, m + 1, s, sp, p.J * std::sqrt(m + 1.0));
        La.add(n + 1, m, s, sp, -p.J * std::sqrt(n + 1.0));
        La.add(n, m - 1, s, sp, p.J * std::sqrt(double(m)));

        // Rabi coupling.
        if (s == -1) L0.add(n - 1, m, +1, sp, p.Omega * std::sqrt(double(n)));
        if (s == +1) L0.add(n + 1, m, -1, sp, p.Omega * std::sqrt(n + 1.0));
        if (sp == +1) L0.add(n, m + 1, s, -1, -p.Omega * std::sqrt(m + 1.0));
        if (sp == -1) L0.add(n, m - 1, s, +1, -p.Omega * std::sqrt(double(m)));

        // Jump terms of photon loss, emitter decay and emitter pump.
        L0.add(n + 1, m + 1, s, sp, I * p.Gamma_l * std::sqrt((n + 1.0) * (m + 1.0)));
        if (s == -1 && sp == -1) L0.add(n, m, +1, +1, I * p.gamma);
        if (s == +1 && sp == +1) L0.add(n, m, -1, -1, I * p.Gamma_p);
    }
    return out;
}

cplx order_parameter(const GutzwillerState& s) {
    cplx psi = 0.0;
    for (int n = 0; n < s.basis.n_max(); ++n)
        for (int sg : {-1, 1}) psi += std::sqrt(n + 1.0) * s.at(n + 1, n, sg, sg);
    return psi;
}

Eigen::MatrixXcd build_superoperator(const GutzwillerState& s, const ModelParams& p) {
    const SuperoperatorParts parts = superoperator_parts(p);
    if (!(parts.basis == s.basis)) throw IndexError("state basis does not match parameters");
    const cplx zpsi = double(p.z()) * order_parameter(s);
    return parts.assemble(zpsi, std::conj(zpsi));
}

Eigen::RowVectorXcd u_row(const LocalBasis& b) {
    Eigen::RowVectorXcd u = Eigen::RowVectorXcd::Zero(b.dim_rho());
    for (int n = 0; n < b.n_max(); ++n)
        for (int sg : {-1, 1}) u[b.flat_index(n + 1, n, sg, sg)] = std::sqrt(n + 1.0);
    return u;
}

Eigen::RowVectorXcd v_row(const LocalBasis& b) {
    Eigen::RowVectorXcd v = Eigen::RowVectorXcd::Zero(b.dim_rho());
    for (int n = 0; n < b.n_max(); ++n)
        for (int sg : {-1, 1}) v[b.flat_index(n, n + 1, sg, sg)] = std::sqrt(n + 1.0);
    return v;
}

Eigen::VectorXcd commutator_adag(const GutzwillerState& s) {
    const LocalBasis& b = s.basis;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(b.dim_rho());
    for (int r = 0; r < b.dim_rho(); ++r) {
        const ElementIndex e = b.unflatten(r);
        cplx v = 0.0;
        if (e.n >= 1) v += std::sqrt(double(e.n)) * s.at(e.n - 1, e.m, e.sigma, e.sigma_p);
        if (e.m + 1 <= b.n_max()) v -= std::sqrt(e.m + 1.0) * s.at(e.n, e.m + 1, e.sigma, e.sigma_p);
        out[r] = v;
    }
    return out;
}

Eigen::VectorXcd commutator_a(const GutzwillerState& s) {
    const LocalBasis& b = s.basis;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(b.dim_rho());
    for (int r = 0; r < b.dim_rho(); ++r) {
        const ElementIndex e = b.unflatten(r);
        cplx v = 0.0;
        if (e.n + 1 <= b.n_max()) v += std::sqrt(e.n + 1.0) * s.at(e.n + 1, e.m, e.sigma, e.sigma_p);
        if (e.m >= 1) v -= std::sqrt(double(e.m)) * s.at(e.n, e.m - 1, e.sigma, e.sigma_p);
        out[r] = v;
    }
    return out;
}

Eigen::VectorXcd density_vertex(const GutzwillerState& s) {
    const LocalBasis& b = s.basis;
    Eigen::VectorXcd out(b.dim_rho());
    for (int r = 0; r < b.dim_rho(); ++r) {
        const ElementIndex e = b.unflatten(r);
        out[r] = double(e.n - e.m) * s.c[r];
    }
    return out;
}

Eigen::MatrixXcd fluctuation_matrix(const GutzwillerState& c0, double omega0, const ModelParams& p, double jcos) {
    const SuperoperatorParts parts = superoperator_parts(p);
    const LocalBasis& b = c0.basis;
    const cplx zpsi = double(p.z()) * (u_row(b) * c0.c)(0);
    const cplx zpsibar = double(p.z()) * (v_row(b) * c0.c)(0);
    Eigen::MatrixXcd A = parts.assemble(zpsi, zpsibar);
    A -= jcos * (commutator_adag(c0) * u_row(b) + commutator_a(c0) * v_row(b));
    A.diagonal() -= omega0 * charge_diagonal(b).cast<cplx>();
    return A;
}

}  // namespace ddbh
