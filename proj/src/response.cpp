#include "ddbh/response.hpp"

#include <cmath>
#include <numbers>

#include "ddbh/pool.hpp"
#include "ddbh/simd.hpp"

namespace ddbh {

namespace {

Eigen::RowVectorXcd index_transpose(const Eigen::RowVectorXcd& x, const LocalBasis& b) {
    Eigen::RowVectorXcd y(x.size());
    for (int f = 0; f < x.size(); ++f) {
        const ElementIndex e = b.unflatten(f);
        y[b.flat_index(e.m, e.n, e.sigma_p, e.sigma)] = x[f];
    }
    return y;
}

}  // namespace

PerturbationVectors perturbation_vectors(const GutzwillerState& c0) {
    return {commutator_adag(c0), commutator_a(c0), density_vertex(c0)};
}

Eigen::VectorXcd perturbation_weights(const ModeSet& m, const PerturbationVectors& v, Channel ch) {
    return m.left_x * (ch == Channel::Density ? v.N0 : v.P0);
}

Residues residues(const ModeSet& m, const GutzwillerState& c0) {
    const PerturbationVectors v = perturbation_vectors(c0);
    const Eigen::VectorXcd xp = perturbation_weights(m, v, Channel::Particle);
    const Eigen::VectorXcd xn = perturbation_weights(m, v, Channel::Density);
    const Eigen::VectorXcd p0c = v.P0.conjugate();
    Residues r;
    const int n = m.size();
    r.Z.resize(n);
    r.Zbar.resize(n);
    r.Y.resize(n);
    r.chi.resize(n);
    for (int a = 0; a < n; ++a) {
        const ModeWeights& w = m.weights[a];
        r.Z[a] = w.U * xp[a];
        r.Zbar[a] = w.V * xp[a];
        r.Y[a] = w.V * (index_transpose(m.left_x.row(a), c0.basis) * p0c)(0);
        r.chi[a] = w.N * xn[a];
    }
    return r;
}

std::vector<cplx> pole_sum(const Eigen::VectorXcd& poles, const Eigen::VectorXcd& r, const std::vector<double>& w) {
    const int np = static_cast<int>(poles.size());
    std::vector<double> pr(np), pi(np), zr(np), zi(np);
    for (int a = 0; a < np; ++a) {
        pr[a] = poles[a].real();
        pi[a] = poles[a].imag();
        zr[a] = r[a].real();
        zi[a] = r[a].imag();
        if (pi[a] == 0.0 && r[a] != 0.0)
            for (double x : w)
                if (x == pr[a]) throw PoleError("frequency " + std::to_string(x) + " sits on an undamped pole");
    }
    const int nw = static_cast<int>(w.size());
    std::vector<double> gr(nw), gi(nw);
    simd::kernels().pole_sum(np, pr.data(), pi.data(), zr.data(), zi.data(), nw, w.data(), gr.data(), gi.data());
    std::vector<cplx> g(nw);
    for (int j = 0; j < nw; ++j) g[j] = cplx(gr[j], gi[j]);
    return g;
}

Mirrors default_mirrors(const ModelParams& p) {
    const double e = std::sqrt(p.Gamma_l);
    return {e, e};
}

InputOutput input_output(cplx G, cplx Delta, const Mirrors& m) {
    const cplx mi(0.0, -1.0);
    InputOutput io;
    io.T = mi * m.eta_L * std::conj(m.eta_R) * G;
    io.R = 1.0 + mi * std::norm(m.eta_L) * G;
    io.F = mi * m.eta_L * std::conj(m.eta_R) * Delta;
    io.violation = std::norm(io.T) + std::norm(io.R) - 1.0;
    return io;
}

ResponseMap response_map(const std::vector<ModeSet>& sets, const GutzwillerState& c0, const std::vector<double>& omega,
                         const Mirrors& mirrors, int workers) {
    ResponseMap map;
    map.omega = omega;
    map.mirrors = mirrors;
    const int nk = static_cast<int>(sets.size());
    const int nw = static_cast<int>(omega.size());
    const size_t total = size_t(nk) * nw;
    map.k.resize(nk);
    map.residues.resize(nk);
    map.poles.resize(nk);
    map.G.resize(total);
    map.Delta.resize(total);
    map.chi.resize(total);
    map.T.resize(total);
    map.R.resize(total);
    map.F.resize(total);
    map.A.resize(total);
    map.violation.resize(total);
    parallel_for(nk, workers, [&](int ik) {
        const ModeSet& m = sets[ik];
        map.k[ik] = m.k;
        map.residues[ik] = residues(m, c0);
        map.poles[ik] = m.omega;
        const Residues& r = map.residues[ik];
        const std::vector<cplx> G = pole_sum(m.omega, r.Z, omega);
        const std::vector<cplx> D = pole_sum(m.omega, r.Zbar, omega);
        const std::vector<cplx> X = pole_sum(m.omega, r.chi, omega);
        for (int j = 0; j < nw; ++j) {
            const int i = map.at(ik, j);
            map.G[i] = G[j];
            map.Delta[i] = D[j];
            map.chi[i] = X[j];
            map.A[i] = -G[j].imag() / std::numbers::pi;
            const InputOutput io = input_output(G[j], D[j], mirrors);
            map.T[i] = io.T;
            map.R[i] = io.R;
            map.F[i] = io.F;
            map.violation[i] = io.violation;
        }
    });
    return map;
}

DosReport dos(const ResponseMap& map, double n0) {
    DosReport rep;
    const int nk = static_cast<int>(map.k.size());
    const int nw = map.n_omega();
    rep.expected = 1.0 - 2.0 * n0;
    rep.A_local.assign(nw, 0.0);
    if (nk == 0 || nw == 0) return rep;
    for (int ik = 0; ik < nk; ++ik)
        for (int j = 0; j < nw; ++j) rep.A_local[j] += map.A[map.at(ik, j)] / nk;
    for (int j = 1; j < nw; ++j)
        rep.integral += 0.5 * (rep.A_local[j] + rep.A_local[j - 1]) * (map.omega[j] - map.omega[j - 1]);
    const double a = map.omega.front(), b = map.omega.back();
    for (int ik = 0; ik < nk; ++ik) {
        const Eigen::VectorXcd& p = map.poles[ik];
        const Eigen::VectorXcd& Z = map.residues[ik].Z;
        cplx s = 0.0;
        for (int i = 0; i < p.size(); ++i) s += Z[i] * (std::log(b - p[i]) - std::log(a - p[i]));
        rep.window_exact += -s.imag() / std::numbers::pi / nk;
    }
    rep.tail_estimate = rep.expected - rep.window_exact;
    return rep;
}

std::vector<double> default_omega_grid(double center, double Gamma_p, int n) {
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = n == 1 ? center : center - 10.0 * Gamma_p + 20.0 * Gamma_p * j / (n - 1);
    return w;
}

}  // namespace ddbh
