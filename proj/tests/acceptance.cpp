#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ddbh/config.hpp"
#include "ddbh/csv.hpp"
#include "ddbh/equilibrium.hpp"
#include "ddbh/meanfield.hpp"
#include "ddbh/response.hpp"
#include "ddbh/runner.hpp"
#include "ddbh/spectrum.hpp"
#include "oracles.hpp"

using namespace ddbh;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kNessTol = 1e-7;
constexpr double kNessSeconds = 30.0;
constexpr double kExpmTol = 1e-8;
constexpr double kOnsetRel = 0.25;
constexpr double kBeta = 0.5, kBetaTol = 0.05;
constexpr double kPairingTol = 1e-8;
constexpr double kQpFitRel = 0.05;
constexpr double kFlatSpread = 0.01;  // in units of omega_c
constexpr double kHalfFilling = 1e-3;
constexpr double kGapR2 = 0.99, kGapRootRel = 0.05;
constexpr double kGoldstoneRe = 1e-6, kDiffusiveR2 = 0.99;
constexpr double kSumRuleTol = 1e-6;
constexpr double kDirectTol = 1e-8;
constexpr double kAmplifiedFraction = 0.9;
constexpr double kEqTol = 1e-8, kSlopeRel = 1e-6;
constexpr double kUVTol = 0.05;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int workers() { return std::max(1u, std::thread::hardware_concurrency()); }

ModelParams driven(double Omega, double zJ) {
    ModelParams p;
    p.Omega = Omega;
    p.Gamma_l = 0.05;
    p.gamma = 1e-3;
    p.Gamma_p = 1.0;
    return with_zJ(p, zJ);
}

NessResult ness(const ModelParams& p, const PropagateOptions& o = {}) {
    NessResult r = propagate_to_ness(seeded_mixed_state(p.basis()), p, o);
    if (!r.converged) throw std::runtime_error("NESS did not converge");
    return r;
}

double zJ_critical(double Omega) {
    const auto c = ip_instability_threshold(driven(Omega, 0.0), 0.05, 10.0, 1e-10);
    if (!c) throw std::runtime_error("no IP instability below zJ = 10");
    return *c;
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        ss_res += std::pow(y[i] - f.intercept - f.slope * x[i], 2);
        ss_tot += std::pow(y[i] - sy / n, 2);
    }
    f.r2 = 1.0 - ss_res / ss_tot;
    return f;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome analytic_ness() {
    Outcome o{true, ""};
    PropagateOptions opt;
    opt.polish = false;
    opt.tol = 1e-10;
    for (double zJ : {0.0, 0.5, 1.0}) {
        const ModelParams p = driven(0.5, zJ);
        const auto t0 = std::chrono::steady_clock::now();
        const NessResult r = ness(p, opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double err = (r.c0.c - analytic_ip_ness(p).c).cwiseAbs().maxCoeff();
        o.pass = o.pass && r.phase == Phase::IP && err < kNessTol && secs < kNessSeconds;
        o.detail += "zJ=" + fmt("%g", zJ) + " err " + fmt("%.2e", err) + " in " + fmt("%.2f", secs) + "s; ";
    }
    return o;
}

Outcome decoupled_expm() {
    const ModelParams p = driven(0.5, 0.0);
    const GutzwillerState s0 = seeded_mixed_state(p.basis(), 0.05);
    const Eigen::MatrixXcd M = oracle::operator_lindbladian(p);
    Propagator prop(p);
    Eigen::VectorXcd c = s0.c;
    double worst = 0.0;
    for (int block = 1; block <= 10; ++block) {
        prop.run(c, 0.01, 500);
        worst = std::max(worst, (c - oracle::dense_propagate(M, s0.c, 5.0 * block)).cwiseAbs().maxCoeff());
    }
    return {worst < kExpmTol, "max deviation over t in [0, 50]: " + fmt("%.2e", worst)};
}

Outcome onset_cut(const fs::path& workdir, double zJc) {
    const ModelParams base = driven(0.16, 0.0);
    std::vector<ModelParams> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(with_zJ(base, 0.025 * i));
    ScanOptions so;
    so.chain_length = static_cast<int>(grid.size());
    so.workers = 1;
    const auto scan = phase_scan(grid, so);
    {
        CsvWriter w((workdir / "onset_cut.csv").string(), {"zJ", "n0", "abs_psi0", "omega0", "phase"});
        for (const ScanEntry& e : scan) {
            w << e.params.z() * e.params.J << e.obs.n0 << std::abs(e.ness.psi0) << e.ness.omega0
              << (e.ok() ? phase_name(e.ness.phase) : "failed");
            w.end_row();
        }
    }
    int first_sfp = -1;
    for (int i = 0; i < static_cast<int>(scan.size()); ++i) {
        if (!scan[i].ok()) throw std::runtime_error("scan point failed: " + scan[i].error);
        if (first_sfp < 0 && scan[i].ness.phase == Phase::SFP) first_sfp = i;
    }
    if (first_sfp <= 0) return {false, "no IP to SFP onset on the scanned cut"};
    const double lo = 0.025 * (first_sfp - 1), hi = 0.025 * first_sfp;
    const bool bracketed = zJc > lo && zJc <= hi;
    const auto est = critical_hopping_estimate(base);
    const double rel = est ? std::abs(*est - zJc) / zJc : INFINITY;

    // Exponent from Newton continuation down to the threshold.
    const NessResult start = ness(with_zJ(base, zJc + 1.0));
    std::vector<double> path;
    for (int i = 1; i <= 60; ++i) path.push_back(zJc + std::pow(1e-4, i / 60.0));
    const auto chain = continue_in_zJ(start, base, path);
    std::vector<double> lx, ly;
    for (size_t i = 0; i < chain.size(); ++i) {
        const double d = path[i] - zJc;
        if (!chain[i].converged) throw std::runtime_error("continuation failed at zJ - zJc = " + fmt("%.2e", d));
        if (d >= 1e-4 * (1 - 1e-12) && d <= 1e-2) {
            lx.push_back(std::log(d));
            ly.push_back(std::log(std::abs(chain[i].psi0)));
        }
    }
    const LineFit f = fit_line(lx, ly);
    const bool beta_ok = std::abs(f.slope - kBeta) < kBetaTol;
    std::ostringstream d;
    d << "scan onset in (" << lo << ", " << hi << "], stability threshold zJc = " << fmt("%.5f", zJc)
      << (bracketed ? " (bracketed)" : " (NOT bracketed)") << "; estimate "
      << (est ? fmt("%.5f", *est) : std::string("none")) << ", relative offset " << fmt("%.3f", rel)
      << (rel < kOnsetRel ? " ok" : " exceeds 0.25") << "; beta = " << fmt("%.4f", f.slope) << " from "
      << lx.size() << " points" << (beta_ok ? " ok" : " out of range");
    return {bracketed && rel < kOnsetRel && beta_ok, d.str()};
}

const std::vector<int>& band(const BranchTable& t, const std::string& label) {
    const auto it = t.band.find(label);
    if (it == t.band.end()) throw std::runtime_error("branch " + label + " missing");
    return it->second;
}

double qp_spread(const ModelParams& p, const std::vector<Wavevector>& path) {
    const NessResult r = ness(p);
    const auto sets = mode_sets(r, p, path, workers());
    const BranchTable table = classify_branches(sets, Phase::IP);
    const auto& qp = band(table, "QP");
    double lo = INFINITY, hi = -INFINITY;
    for (size_t i = 0; i < sets.size(); ++i) {
        lo = std::min(lo, sets[i].omega[qp[i]].real());
        hi = std::max(hi, sets[i].omega[qp[i]].real());
    }
    return hi - lo;
}

Outcome ip_spectrum(double zJc) {
    const std::vector<Wavevector> path = diagonal_path(2, 50);
    const ModelParams p = driven(0.16, 0.5 * zJc);
    const NessResult r = ness(p);
    if (r.phase != Phase::IP) return {false, "NESS at zJ = zJc/2 is not in the IP"};
    const double n0 = observables(r.c0).n0;
    const auto sets = mode_sets(r, p, path, workers());
    double pairing = 0.0;
    for (const ModeSet& m : sets) pairing = std::max(pairing, pairing_defect(m.omega));
    const BranchTable table = classify_branches(sets, Phase::IP);
    const auto& qp = band(table, "QP");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < sets.size(); ++i) {
        const double pred = p.omega_c - hopping_cos(p, path[i]) * (1.0 - 2.0 * n0);
        num += std::pow(sets[i].omega[qp[i]].real() - pred, 2);
        den += pred * pred;
    }
    const double fit = std::sqrt(num / den);

    // Half filling of the analytic state; n0 falls monotonically with zJ here.
    double a = 0.0, b = zJc;
    auto n0_at = [&](double zJ) { return observables(analytic_ip_ness(driven(0.16, zJ))).n0; };
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        (n0_at(m) > 0.5 ? a : b) = m;
    }
    const double zJ_half = 0.5 * (a + b);
    const double spread_half = qp_spread(driven(0.16, zJ_half), path);

    // Flattest band by golden section.
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x0 = std::max(0.0, zJ_half - 0.3), x3 = std::min(0.999 * zJc, zJ_half + 0.3);
    double x1 = x3 - g * (x3 - x0), x2 = x0 + g * (x3 - x0);
    double f1 = qp_spread(driven(0.16, x1), path), f2 = qp_spread(driven(0.16, x2), path);
    while (x3 - x0 > 1e-6) {
        if (f1 < f2) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - g * (x3 - x0);
            f1 = qp_spread(driven(0.16, x1), path);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + g * (x3 - x0);
            f2 = qp_spread(driven(0.16, x2), path);
        }
    }
    const double zJ_flat = 0.5 * (x0 + x3);
    const double n0_flat = observables(ness(driven(0.16, zJ_flat)).c0).n0;
    const ModelParams ph = driven(0.16, zJ_half);

    const bool ok = pairing < kPairingTol && fit < kQpFitRel && spread_half < kFlatSpread * ph.omega_c &&
                    std::abs(n0_flat - 0.5) < kHalfFilling;
    std::ostringstream d;
    d << "pairing " << fmt("%.1e", pairing) << "; QP fit residual " << fmt("%.4f", fit) << " at n0 = "
      << fmt("%.4f", n0) << "; spread " << fmt("%.2e", spread_half) << " at zJ(n0=1/2) = " << fmt("%.5f", zJ_half)
      << "; flattest band at zJ = " << fmt("%.5f", zJ_flat) << " with |n0 - 1/2| = "
      << fmt("%.2e", std::abs(n0_flat - 0.5));
    return {ok, d.str()};
}

Outcome gap_closing(double zJc) {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        const double zJ = zJc * (0.8 + 0.199 * i / 19.0);
        const ModelParams p = driven(0.16, zJ);
        const NessResult r = ness(p);
        if (r.phase != Phase::IP) throw std::runtime_error("left the IP below threshold");
        const std::vector<ModeSet> set{mode_set(r, p, Wavevector(p.d, 0.0))};
        const BranchTable t = classify_branches(set, Phase::IP);
        const double gap = std::min(-set[0].omega[band(t, "QP")[0]].imag(), -set[0].omega[band(t, "QH")[0]].imag());
        x.push_back(zJ);
        y.push_back(gap);
    }
    const LineFit f = fit_line(x, y);
    const double root = -f.intercept / f.slope;
    const double rel = std::abs(root - zJc) / zJc;
    std::ostringstream d;
    d << "Gamma_ph(0) from " << fmt("%.3e", y.front()) << " to " << fmt("%.3e", y.back()) << "; R^2 = "
      << fmt("%.5f", f.r2) << "; root " << fmt("%.5f", root) << " vs zJc " << fmt("%.5f", zJc) << " (rel "
      << fmt("%.2e", rel) << ")";
    return {f.r2 > kGapR2 && rel < kGapRootRel, d.str()};
}

struct SfpNearOrigin {
    std::vector<ModeSet> sets;
    BranchTable table;
    std::vector<int> window;
};

SfpNearOrigin sfp_near_origin(const fs::path& workdir) {
    const ModelParams p = driven(0.3, 3.0);
    const NessResult r = ness(p);
    if (r.phase != Phase::SFP) throw std::runtime_error("reference point is not in the SFP");
    SfpNearOrigin s;
    s.sets = mode_sets(r, p, diagonal_path(2, 60, 0.03, 1e-3), workers());
    s.table = classify_branches(s.sets, Phase::SFP);
    s.window = diffusive_window(s.sets, s.table);
    CsvWriter w((workdir / "goldstone_near_origin.csv").string(),
                {"k_norm", "Re_G", "Im_G", "absU_G", "absV_G", "Re_A", "Im_A", "absU_A", "absV_A"});
    for (size_t i = 0; i < s.sets.size(); ++i) {
        const int g = band(s.table, "G")[i], a = band(s.table, "A")[i];
        const ModeSet& m = s.sets[i];
        w << norm_k(m.k) << m.omega[g].real() << m.omega[g].imag() << std::abs(m.weights[g].U)
          << std::abs(m.weights[g].V) << m.omega[a].real() << m.omega[a].imag() << std::abs(m.weights[a].U)
          << std::abs(m.weights[a].V);
        w.end_row();
    }
    return s;
}

Outcome goldstone(const SfpNearOrigin& s) {
    const auto& g = band(s.table, "G");
    const ModeSet& m0 = s.sets[s.table.reference];
    const double re0 = std::abs(m0.omega[g[s.table.reference]].real());
    if (s.window.size() < 3) return {false, "diffusive window has fewer than 3 points"};
    // Im w = -D k^2 through the origin.
    double sxy = 0, sxx = 0, syy = 0;
    std::vector<double> xs, ys;
    for (int i : s.window) {
        const double k2 = std::pow(norm_k(s.sets[i].k), 2);
        const double im = s.sets[i].omega[g[i]].imag();
        xs.push_back(k2);
        ys.push_back(im);
        sxy += k2 * im;
        sxx += k2 * k2;
    }
    const double D = -sxy / sxx;
    double mean = 0;
    for (double y : ys) mean += y / ys.size();
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        ss_res += std::pow(ys[i] + D * xs[i], 2);
        syy += std::pow(ys[i] - mean, 2);
    }
    ss_tot = syy;
    const double r2 = 1.0 - ss_res / ss_tot;
    // Same fit over the lower half of the window, reported only.
    std::vector<double> hx, hy;
    const double k_half = 0.5 * norm_k(s.sets[s.window.back()].k);
    for (size_t i = 0; i < xs.size(); ++i)
        if (std::sqrt(xs[i]) <= k_half) {
            hx.push_back(xs[i]);
            hy.push_back(ys[i]);
        }
    double hxy = 0, hxx = 0, hm = 0, hres = 0, htot = 0;
    for (size_t i = 0; i < hx.size(); ++i) {
        hxy += hx[i] * hy[i];
        hxx += hx[i] * hx[i];
        hm += hy[i] / hx.size();
    }
    for (size_t i = 0; i < hx.size(); ++i) {
        hres += std::pow(hy[i] - hxy / hxx * hx[i], 2);
        htot += std::pow(hy[i] - hm, 2);
    }
    std::ostringstream d;
    d << "|Re w_G| = " << fmt("%.2e", re0) << " at |k| = " << fmt("%.2e", norm_k(m0.k)) << "; D = " << fmt("%.4f", D)
      << ", R^2 = " << fmt("%.6f", r2) << " over " << s.window.size() << " points up to |k| = "
      << fmt("%.4f", norm_k(s.sets[s.window.back()].k)) << " (lower half of the window: D = "
      << fmt("%.4f", -hxy / hxx) << ", R^2 = " << fmt("%.6f", 1.0 - hres / htot) << ")";
    return {re0 < kGoldstoneRe && r2 > kDiffusiveR2 && D > 0.0, d.str()};
}

Outcome sum_rule() {
    double worst = 0.0;
    std::ostringstream d;
    for (const auto& [Om, zJ] : {std::pair{0.5, 0.5}, std::pair{0.3, 3.0}}) {
        const ModelParams p = driven(Om, zJ);
        const NessResult r = ness(p);
        const double n0 = observables(r.c0).n0;
        const auto sets = mode_sets(r, p, diagonal_path(2, 50), workers());
        double w = 0.0;
        for (const ModeSet& m : sets) w = std::max(w, std::abs(residues(m, r.c0).Z.sum() - (1.0 - 2.0 * n0)));
        d << phase_name(r.phase) << " max error " << fmt("%.2e", w) << "; ";
        worst = std::max(worst, w);
    }
    return {worst < kSumRuleTol, d.str()};
}

Outcome green_and_gain() {
    const ModelParams p = driven(0.5, 0.5);
    const NessResult r = ness(p);
    if (r.phase != Phase::IP) return {false, "deep IP point is not in the IP"};
    const PerturbationVectors v = perturbation_vectors(r.c0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uk(-std::numbers::pi, std::numbers::pi), uw(-1.0, 3.0);
    double direct = 0.0;
    for (int i = 0; i < 5; ++i) {
        const Wavevector k{uk(rng), uk(rng)};
        const double w = uw(rng);
        const ModeSet m = mode_set(r, p, k);
        const cplx G = pole_sum(m.omega, residues(m, r.c0).Z, {w})[0];
        const cplx Gd = oracle::direct_green(build_A_block(r, p, k), u_row(r.c0.basis), v.P0, w);
        direct = std::max(direct, std::abs(G - Gd));
    }

    const auto path = diagonal_path(2, 50);
    const auto sets = mode_sets(r, p, path, workers());
    const BranchTable table = classify_branches(sets, Phase::IP);
    const auto& qp = band(table, "QP");
    const ResponseMap map = response_map(sets, r.c0, default_omega_grid(p.omega_c, p.Gamma_p), default_mirrors(p),
                                         workers());
    long neg = 0, amplified = 0;
    for (size_t ik = 0; ik < sets.size(); ++ik) {
        const cplx wq = sets[ik].omega[qp[ik]];
        for (int j = 0; j < map.n_omega(); ++j) {
            if (std::abs(map.omega[j] - wq.real()) > 2.0 * std::abs(wq.imag())) continue;
            const int at = map.at(static_cast<int>(ik), j);
            if (map.A[at] >= 0.0) continue;
            ++neg;
            if (std::norm(map.R[at]) > 1.0) ++amplified;
        }
    }
    const double frac = neg ? static_cast<double>(amplified) / neg : 0.0;
    std::ostringstream d;
    d << "direct-solve max difference " << fmt("%.2e", direct) << "; |R|^2 > 1 on " << amplified << " of " << neg
      << " negative-A QP points (" << fmt("%.3f", frac) << ")";
    return {direct < kDirectTol && neg > 0 && frac >= kAmplifiedFraction, d.str()};
}

Outcome equilibrium() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0, worst_slope = 0.0;
    int sets = 0;
    while (sets < 10) {
        HardCoreParams p;
        p.z = 2 * (1 + static_cast<int>(3 * u(rng)));
        p.J = 0.2 + u(rng);
        p.Ubar = p.J * u(rng);
        p.omega_c = -p.z * (p.J + p.Ubar) + u(rng) * p.z * (2 * p.J + p.Ubar);
        if (!p.in_domain()) continue;
        const HardCoreMeanField m = hc_meanfield(p);
        if (m.psi0_sq < 1e-3) continue;
        ++sets;
        for (int i = 0; i < 100; ++i) {
            const std::vector<double> k(p.d(), std::numbers::pi * i / 99.0);
            worst = std::max(worst, std::abs(oracle::numeric_goldstone(p, k) - hc_goldstone(p, k)));
        }
        const double cs = sound_velocity(p);
        worst_slope = std::max(worst_slope, std::abs(oracle::equilibrium_slope(p) - cs) / cs);
    }
    return {worst < kEqTol && worst_slope < kSlopeRel,
            "max |numeric - closed form| " + fmt("%.2e", worst) + "; max relative slope error " +
                fmt("%.2e", worst_slope)};
}

Outcome uv_balance(const SfpNearOrigin& s) {
    if (s.window.empty()) return {false, "empty diffusive window"};
    double worst = 0.0;
    for (int i : s.window)
        for (const char* label : {"G", "A"}) {
            const ModeWeights& w = s.sets[i].weights[band(s.table, label)[i]];
            worst = std::max(worst, std::abs(std::abs(w.U) - std::abs(w.V)));
        }
    return {worst < kUVTol, "max ||U| - |V|| over the window " + fmt("%.2e", worst)};
}

std::string slurp(const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const fs::path& workdir) {
    const std::string text =
        "task: phase_diagram\n"
        "model: {Gamma_l: 0.05, gamma: 0.001, Gamma_p: 1.0, omega_c: 1.0}\n"
        "sweep:\n"
        "  - {param: Omega, min: 0.05, max: 0.6, count: 10}\n"
        "  - {param: J, min: 0.0, max: 0.3125, count: 12}\n";
    std::string out[2];
    int i = 0;
    for (int nw : {1, 8}) {
        RunConfig c = parse_config(text);
        c.workers = nw;
        c.output = (workdir / ("phase_diagram_w" + std::to_string(nw))).string();
        run(c);
        out[i++] = slurp(fs::path(c.output) / "phase_diagram.csv");
    }
    const bool same = !out[0].empty() && out[0] == out[1];
    return {same, std::string(same ? "identical" : "different") + " phase_diagram.csv (" +
                      std::to_string(out[0].size()) + " bytes) for 1 and 8 workers"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::string workdir = "acceptance_out";
    app.add_option("--workdir", workdir, "scratch and artefact directory");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(workdir);

    int failed = 0;
    auto report = [&](int n, const std::function<Outcome()>& f) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("criterion %2d %s: %s [%.1fs]\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    double zJc16 = 0.0;
    try {
        zJc16 = zJ_critical(0.16);
    } catch (const std::exception& e) {
        std::printf("threshold search failed: %s\n", e.what());
    }
    SfpNearOrigin sfp;
    std::string sfp_error;
    try {
        sfp = sfp_near_origin(workdir);
    } catch (const std::exception& e) {
        sfp_error = e.what();
    }
    auto need_sfp = [&] {
        if (!sfp_error.empty()) throw std::runtime_error(sfp_error);
    };

    report(1, analytic_ness);
    report(2, decoupled_expm);
    report(3, [&] { return onset_cut(workdir, zJc16); });
    report(4, [&] { return ip_spectrum(zJc16); });
    report(5, [&] { return gap_closing(zJc16); });
    report(6, [&] {
        need_sfp();
        return goldstone(sfp);
    });
    report(7, sum_rule);
    report(8, green_and_gain);
    report(9, equilibrium);
    report(10, [&] {
        need_sfp();
        return uv_balance(sfp);
    });
    report(11, [&] { return determinism(workdir); });

    std::printf("%d of 11 criteria passed\n", 11 - failed);
    return failed == 0 ? 0 : 1;
}
