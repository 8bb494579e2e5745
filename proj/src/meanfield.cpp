#include "ddbh/meanfield.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ddbh/pool.hpp"
#include "ddbh/simd.hpp"

namespace ddbh {

namespace {

void rotate_by_charge(GutzwillerState& s, double phase) {
    const Eigen::VectorXd K = charge_diagonal(s.basis);
    for (int i = 0; i < s.c.size(); ++i) s.c[i] *= std::polar(1.0, phase * K[i]);
}

Eigen::VectorXcd holomorphic_rhs(const SuperoperatorParts& parts, const Eigen::VectorXcd& c, double z,
                                 double omega0, const Eigen::VectorXd& K) {
    const cplx zpsi = z * (u_row(parts.basis) * c)(0);
    const cplx zpsibar = z * (v_row(parts.basis) * c)(0);
    Eigen::VectorXcd F = parts.assemble(zpsi, zpsibar) * c;
    F -= omega0 * (K.cast<cplx>().array() * c.array()).matrix();
    return F;
}

}  // namespace

const char* phase_name(Phase p) { return p == Phase::SFP ? "SFP" : "IP"; }

Propagator::Propagator(const ModelParams& p)
    : basis_(p.basis()), dim_(basis_.dim_rho()), z_(p.z()), buf_(10 * basis_.dim_rho()) {
    const SuperoperatorParts parts = superoperator_parts(p);
    l0_re_.resize(dim_ * dim_);
    l0_im_.resize(dim_ * dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j < dim_; ++j) {
            l0_re_[i * dim_ + j] = parts.L0(i, j).real();
            l0_im_[i * dim_ + j] = parts.L0(i, j).imag();
            if (parts.Ladag(i, j) != 0.0) hop_adag_.push_back({i, j, parts.Ladag(i, j).real()});
            if (parts.La(i, j) != 0.0) hop_a_.push_back({i, j, parts.La(i, j).real()});
        }
    }
    for (int n = 0; n < basis_.n_max(); ++n)
        for (int sg : {-1, 1}) psi_terms_.emplace_back(basis_.flat_index(n + 1, n, sg, sg), std::sqrt(n + 1.0));
}

void Propagator::rhs(const double* xr, const double* xi, double* yr, double* yi) {
    simd::kernels().cmatvec(dim_, l0_re_.data(), l0_im_.data(), xr, xi, yr, yi);
    double pr = 0.0, pi = 0.0;
    for (const auto& [idx, w] : psi_terms_) {
        pr += w * xr[idx];
        pi += w * xi[idx];
    }
    const double ar = z_ * pr, ai = z_ * pi;  // z psi
    for (const Entry& e : hop_adag_) {
        yr[e.row] += e.coeff * (ar * xr[e.col] - ai * xi[e.col]);
        yi[e.row] += e.coeff * (ar * xi[e.col] + ai * xr[e.col]);
    }
    for (const Entry& e : hop_a_) {  // z conj(psi)
        yr[e.row] += e.coeff * (ar * xr[e.col] + ai * xi[e.col]);
        yi[e.row] += e.coeff * (ar * xi[e.col] - ai * xr[e.col]);
    }
    // dc/dt = -i y
    for (int i = 0; i < dim_; ++i) {
        const double re = yr[i];
        yr[i] = yi[i];
        yi[i] = -re;
    }
}

void Propagator::step(Eigen::VectorXcd& c, double dt) { run(c, dt, 1); }

void Propagator::run(Eigen::VectorXcd& c, double dt, long n_steps, long sample_every,
                     const std::function<void(long, const Eigen::VectorXcd&)>& on_sample) {
    const int D = dim_;
    double* xr = buf_.data();
    double* xi = xr + D;
    double* tr = xi + D;
    double* ti = tr + D;
    double* kr = ti + D;
    double* ki = kr + D;
    double* ar = ki + D;
    double* ai = ar + D;
    for (int i = 0; i < D; ++i) {
        xr[i] = c[i].real();
        xi[i] = c[i].imag();
    }
    auto to_vector = [&](Eigen::VectorXcd& v) {
        for (int i = 0; i < D; ++i) v[i] = cplx(xr[i], xi[i]);
    };
    Eigen::VectorXcd sample(D);
    for (long s = 1; s <= n_steps; ++s) {
        rhs(xr, xi, kr, ki);  // k1
        for (int i = 0; i < D; ++i) {
            ar[i] = kr[i];
            ai[i] = ki[i];
            tr[i] = xr[i] + 0.5 * dt * kr[i];
            ti[i] = xi[i] + 0.5 * dt * ki[i];
        }
        rhs(tr, ti, kr, ki);  // k2
        for (int i = 0; i < D; ++i) {
            ar[i] += 2.0 * kr[i];
            ai[i] += 2.0 * ki[i];
            tr[i] = xr[i] + 0.5 * dt * kr[i];
            ti[i] = xi[i] + 0.5 * dt * ki[i];
        }
        rhs(tr, ti, kr, ki);  // k3
        for (int i = 0; i < D; ++i) {
            ar[i] += 2.0 * kr[i];
            ai[i] += 2.0 * ki[i];
            tr[i] = xr[i] + dt * kr[i];
            ti[i] = xi[i] + dt * ki[i];
        }
        rhs(tr, ti, kr, ki);  // k4
        for (int i = 0; i < D; ++i) {
            xr[i] += dt / 6.0 * (ar[i] + kr[i]);
            xi[i] += dt / 6.0 * (ai[i] + ki[i]);
        }
        if (sample_every > 0 && on_sample && s % sample_every == 0) {
            to_vector(sample);
            on_sample(s, sample);
        }
    }
    to_vector(c);
}

double stationary_residual(const GutzwillerState& s, double omega0, const ModelParams& p) {
    Eigen::MatrixXcd L = build_superoperator(s, p);
    L.diagonal() -= omega0 * charge_diagonal(s.basis).cast<cplx>();
    return (L * s.c).norm();
}

PolishResult polish_stationary(const GutzwillerState& guess, double omega0, const ModelParams& p, bool sfp) {
    const SuperoperatorParts parts = superoperator_parts(p);
    const LocalBasis& b = guess.basis;
    const int D = b.dim_rho();
    const Eigen::VectorXd K = charge_diagonal(b);
    const Eigen::RowVectorXcd U = u_row(b);
    const double z = p.z();

    GutzwillerState c = guess;
    hermitize(c);
    double theta = 0.0;
    if (sfp) {
        theta = std::arg(order_parameter(c));
        rotate_by_charge(c, -theta);
    }
    const int cols = 2 * D + (sfp ? 1 : 0);
    const int rows = 2 * D + 2 + (sfp ? 1 : 0);

    PolishResult out;
    double w0 = sfp ? omega0 : 0.0;
    for (int it = 0; it < 40; ++it) {
        out.iterations = it + 1;
        const Eigen::MatrixXcd A = fluctuation_matrix(c, w0, p, z * p.J);
        const Eigen::VectorXcd F = holomorphic_rhs(parts, c.c, z, w0, K);
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows, cols);
        M.block(0, 0, D, D) = A.real();
        M.block(0, D, D, D) = -A.imag();
        M.block(D, 0, D, D) = A.imag();
        M.block(D, D, D, D) = A.real();
        Eigen::VectorXd rhs(rows);
        rhs.head(D) = -F.real();
        rhs.segment(D, D) = -F.imag();
        const cplx tr = trace(c);
        for (int n = 0; n <= b.n_max(); ++n) {
            for (int sg : {-1, 1}) {
                const int f = b.flat_index(n, n, sg, sg);
                M(2 * D, f) = 1.0;
                M(2 * D + 1, D + f) = 1.0;
            }
        }
        rhs[2 * D] = 1.0 - tr.real();
        rhs[2 * D + 1] = -tr.imag();
        if (sfp) {
            const Eigen::VectorXcd kc = -(K.cast<cplx>().array() * c.c.array()).matrix();
            M.block(0, 2 * D, D, 1) = kc.real();
            M.block(D, 2 * D, D, 1) = kc.imag();
            for (int j = 0; j < D; ++j) M(2 * D + 2, D + j) = U[j].real();
            rhs[2 * D + 2] = -(U * c.c)(0).imag();
        }
        const Eigen::VectorXd dx = M.completeOrthogonalDecomposition().solve(rhs);
        for (int j = 0; j < D; ++j) c.c[j] += cplx(dx[j], dx[D + j]);
        if (sfp) w0 += dx[2 * D];
        hermitize(c);
        if (dx.norm() < 1e-13) break;
    }
    if (sfp) rotate_by_charge(c, theta);
    out.c = c;
    out.omega0 = w0;
    out.residual = stationary_residual(c, w0, p);
    out.ok = std::isfinite(out.residual) && out.residual < 1e-10 && (c.c - guess.c).norm() < 0.1;
    return out;
}

double max_growth_rate(const GutzwillerState& c0, double omega0, const ModelParams& p) {
    double worst = -std::numeric_limits<double>::infinity();
    const double zJ = p.z() * p.J;
    for (double jcos : {zJ, -zJ}) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(fluctuation_matrix(c0, omega0, p, jcos), false);
        worst = std::max(worst, es.eigenvalues().imag().maxCoeff());
        if (zJ == 0.0) break;
    }
    return worst;
}

GutzwillerState rotating_frame_transform(const GutzwillerState& s, double omega0, double t) {
    GutzwillerState out = s;
    rotate_by_charge(out, omega0 * t);
    return out;
}

double extract_limit_cycle_frequency(const std::vector<std::pair<double, cplx>>& samples, double psi_threshold) {
    if (samples.size() < 3) throw InputError("need at least 3 psi samples");
    const double h = samples[1].first - samples[0].first;
    if (!(h > 0.0)) throw InputError("sample times must increase");
    for (size_t i = 1; i < samples.size(); ++i) {
        const double hi = samples[i].first - samples[i - 1].first;
        if (std::abs(hi - h) > 1e-9 * std::max(1.0, std::abs(h))) throw InputError("non-uniform sample spacing");
    }
    size_t below = 0;
    for (const auto& s : samples)
        if (std::abs(s.second) <= psi_threshold) ++below;
    if (below == samples.size()) return 0.0;
    if (below > 0) throw InputError("psi crosses the threshold inside the sample window");

    const size_t n = samples.size();
    std::vector<double> phase(n);
    phase[0] = std::arg(samples[0].second);
    for (size_t i = 1; i < n; ++i) {
        const double d = std::arg(samples[i].second / samples[i - 1].second);
        if (std::abs(d) > 0.9 * std::numbers::pi) throw SamplingError("phase step too large to unwrap");
        phase[i] = phase[i - 1] + d;
    }
    double tm = 0.0, pm = 0.0;
    for (size_t i = 0; i < n; ++i) {
        tm += samples[i].first;
        pm += phase[i];
    }
    tm /= n;
    pm /= n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (samples[i].first - tm) * (phase[i] - pm);
        sxx += (samples[i].first - tm) * (samples[i].first - tm);
    }
    return -sxy / sxx;
}

GutzwillerState analytic_ip_ness(const ModelParams& p) {
    if (!p.hard_core) throw InputError("analytic IP state needs the hard-core basis");
    if (p.Omega == 0.0) throw InputError("analytic IP state undefined for Omega = 0 (division by zero)");
    const double Gp = p.Gamma_p, Gl = p.Gamma_l, g = p.gamma, Om = p.Omega;
    const double det = p.omega_c - p.omega_at_value();
    GutzwillerState s(LocalBasis(1));
    const cplx coh(-det * Gl / (Gp * Om), (Gp + Gl + g) * Gl / (2.0 * Gp * Om));
    const double c0011 = g / Gp + Gp * Gl / (4.0 * Om * Om) *
                                      (std::pow(2.0 * Om / Gp, 2) + std::pow(1.0 + (Gl + g) / Gp, 2) +
                                       std::pow(2.0 * det / Gp, 2));
    s.at(0, 1, 1, -1) = coh;
    s.at(1, 0, -1, 1) = std::conj(coh);
    s.at(0, 0, 1, 1) = c0011;
    s.at(0, 0, -1, -1) = g / Gp * c0011 + (Gl + g) * Gl / (Gp * Gp);
    s.at(1, 1, -1, -1) = (Gl + g) / Gp;
    s.at(1, 1, 1, 1) = 1.0;
    s.c /= trace(s);
    return s;
}

std::optional<double> critical_hopping_estimate(const ModelParams& p) {
    if (!(p.Gamma_l > 0.0)) return std::nullopt;
    const double ratio = p.Gamma_em() / p.Gamma_l;
    if (ratio < 1.0) return std::nullopt;
    return p.Gamma_p * 0.5 * std::sqrt(ratio - 1.0);
}

NessResult propagate_to_ness(const GutzwillerState& init, const ModelParams& p, const PropagateOptions& o) {
    p.validate();
    if (!(o.dt > 0.0)) throw InputError("dt must be > 0");
    if (!(init.basis == p.basis())) throw InputError("initial state basis does not match parameters");
    if (const auto v = validate_state(init, 1e-6); !v.empty()) throw InputError("invalid initial state: " + v[0].message);

    Propagator prop(p);
    const LocalBasis b = p.basis();
    const double window = o.window.value_or(p.Gamma_l > 0.0 ? 10.0 / p.Gamma_l : 10.0 / p.Gamma_p);
    const long per_window = std::max(1L, std::lround(window / o.dt));
    const long sample_every = std::max(1L, std::lround(o.sample_dt / o.dt));
    const long max_steps = std::lround(o.t_max / o.dt);
    const double zero_tol = 1e-7 * p.Gamma_p;
    const cplx tr0 = trace(init);

    Eigen::VectorXcd c = init.c;
    Eigen::VectorXcd c_prev = c;
    std::array<double, 3> inv_prev{NAN, NAN, NAN};
    std::vector<std::pair<double, cplx>> samples;
    NessResult r;
    r.c0 = init;
    long total = 0;
    double w0 = 0.0;

    while (total < max_steps) {
        samples.clear();
        const long n = std::min(per_window, max_steps - total);
        const long offset = total;
        prop.run(c, o.dt, n, sample_every, [&](long s, const Eigen::VectorXcd& v) {
            samples.emplace_back((offset + s) * o.dt, order_parameter(GutzwillerState(b, v)));
        });
        total += n;
        const GutzwillerState s(b, c);
        if (std::abs(trace(s) - tr0) > 100.0 * o.tol)
            throw IntegratorError("trace drifted by " + std::to_string(std::abs(trace(s) - tr0)));

        double psi_max = 0.0, psi_min = std::numeric_limits<double>::infinity();
        for (const auto& sm : samples) {
            psi_max = std::max(psi_max, std::abs(sm.second));
            psi_min = std::min(psi_min, std::abs(sm.second));
        }
        if (psi_max < o.psi_threshold) {
            const double delta = (c - c_prev).norm();
            if (delta < o.tol) {
                r.c0 = s;
                r.converged = true;
                w0 = 0.0;
                break;
            }
            if (o.polish && delta < o.polish_trigger) {
                const PolishResult pr = polish_stationary(s, 0.0, p, false);
                if (pr.ok && std::abs(order_parameter(pr.c)) < o.psi_threshold &&
                    max_growth_rate(pr.c, 0.0, p) <= zero_tol) {
                    r.c0 = pr.c;
                    r.converged = true;
                    r.polished = true;
                    w0 = 0.0;
                    break;
                }
            }
        } else if (psi_min > o.psi_threshold && samples.size() >= 3) {
            w0 = extract_limit_cycle_frequency(samples, o.psi_threshold);
            const ObservableSet ob = observables(s, 1e-6);
            const std::array<double, 3> inv{std::abs(order_parameter(s)), ob.n0, ob.purity};
            double change = 0.0;
            for (int i = 0; i < 3; ++i) change = std::max(change, std::abs(inv[i] - inv_prev[i]));
            if (std::isnan(inv_prev[0])) change = std::numeric_limits<double>::infinity();
            inv_prev = inv;
            if (change < o.tol && stationary_residual(s, w0, p) < o.tol) {
                r.c0 = s;
                r.converged = true;
                break;
            }
            if (o.polish && change < o.polish_trigger) {
                const PolishResult pr = polish_stationary(s, w0, p, true);
                if (pr.ok && std::abs(order_parameter(pr.c)) > o.psi_threshold &&
                    max_growth_rate(pr.c, pr.omega0, p) <= zero_tol) {
                    r.c0 = pr.c;
                    w0 = pr.omega0;
                    r.converged = true;
                    r.polished = true;
                    break;
                }
                // Slow decay towards a stable IP next to the threshold.
                if (std::abs(samples.back().second) < std::abs(samples.front().second)) {
                    const PolishResult ip = polish_stationary(s, 0.0, p, false);
                    if (ip.ok && std::abs(order_parameter(ip.c)) < o.psi_threshold &&
                        max_growth_rate(ip.c, 0.0, p) <= zero_tol) {
                        r.c0 = ip.c;
                        w0 = 0.0;
                        r.converged = true;
                        r.polished = true;
                        break;
                    }
                }
            }
        }
        c_prev = c;
    }
    if (!r.converged) r.c0 = GutzwillerState(b, c);
    r.steps = total;
    r.t_final = total * o.dt;
    r.psi0 = order_parameter(r.c0);
    r.phase = std::abs(r.psi0) > o.psi_threshold ? Phase::SFP : Phase::IP;
    r.omega0 = r.phase == Phase::SFP ? w0 : 0.0;
    r.residual = stationary_residual(r.c0, r.omega0, p);
    return r;
}

std::optional<double> ip_instability_threshold(const ModelParams& p, double zJ_lo, double zJ_hi, double tol) {
    auto growth = [&](double zJ) {
        const ModelParams q = with_zJ(p, zJ);
        return max_growth_rate(analytic_ip_ness(q), 0.0, q);
    };
    const double zero_tol = 1e-7 * p.Gamma_p;
    if (growth(zJ_lo) > zero_tol || growth(zJ_hi) <= zero_tol) return std::nullopt;
    while (zJ_hi - zJ_lo > tol) {
        const double mid = 0.5 * (zJ_lo + zJ_hi);
        (growth(mid) > zero_tol ? zJ_hi : zJ_lo) = mid;
    }
    return 0.5 * (zJ_lo + zJ_hi);
}

std::vector<NessResult> continue_in_zJ(const NessResult& start, const ModelParams& p, const std::vector<double>& zJ) {
    std::vector<NessResult> out(zJ.size());
    GutzwillerState c = start.c0;
    double w0 = start.omega0;
    const bool sfp = start.phase == Phase::SFP;
    for (size_t i = 0; i < zJ.size(); ++i) {
        const ModelParams q = with_zJ(p, zJ[i]);
        const PolishResult pr = polish_stationary(c, w0, q, sfp);
        NessResult& r = out[i];
        r.c0 = pr.c;
        r.omega0 = sfp ? pr.omega0 : 0.0;
        r.psi0 = order_parameter(pr.c);
        r.phase = start.phase;
        r.residual = pr.residual;
        r.polished = true;
        r.converged = pr.ok;
        if (!pr.ok) break;
        c = pr.c;
        w0 = pr.omega0;
    }
    return out;
}

std::vector<ScanEntry> phase_scan(const std::vector<ModelParams>& grid, const ScanOptions& opts) {
    const int N = static_cast<int>(grid.size());
    const int L = std::max(1, opts.chain_length);
    const int chains = (N + L - 1) / L;
    std::vector<ScanEntry> out(N);
    parallel_for(chains, opts.workers, [&](int ch) {
        std::optional<GutzwillerState> prev;
        for (int i = ch * L; i < std::min(N, (ch + 1) * L); ++i) {
            ScanEntry& e = out[i];
            e.params = grid[i];
            try {
                const LocalBasis b = grid[i].basis();
                GutzwillerState init = seeded_mixed_state(b);
                if (opts.warm_start && prev && prev->basis == b) {
                    init = *prev;
                    if (std::abs(order_parameter(init)) < opts.prop.psi_threshold) {
                        for (int n = 0; n < b.n_max(); ++n) {
                            for (int sg : {-1, 1}) {
                                init.at(n + 1, n, sg, sg) += 1e-3;
                                init.at(n, n + 1, sg, sg) += 1e-3;
                            }
                        }
                    }
                    e.warm_started = true;
                }
                e.ness = propagate_to_ness(init, grid[i], opts.prop);
                e.obs = observables(e.ness.c0, 1e-6);
                if (e.ness.converged) prev = e.ness.c0;
                else prev.reset();
            } catch (const std::exception& ex) {
                e.error = ex.what();
                prev.reset();
            }
        }
    });
    return out;
}

}  // namespace ddbh
