#include "ddbh/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ddbh/csv.hpp"
#include "ddbh/pool.hpp"
#include "ddbh/simd.hpp"

#ifndef DDBH_VERSION
#define DDBH_VERSION "dev"
#endif

namespace ddbh {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
    const RunConfig& cfg;
    const Logger& log;
    fs::path dir;
    json manifest;
    RunResult result;

    void say(const std::string& s) const {
        if (log) log(s);
    }
    std::string file(const std::string& name) {
        const std::string p = (dir / name).string();
        result.files.push_back(p);
        return p;
    }
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

void write_observable_row(CsvWriter& w, const ModelParams& p, const NessResult* r, const ObservableSet* o) {
    w << p.Omega << p.J;
    if (r && o) {
        w << o->n0 << std::abs(r->psi0) << r->omega0 << o->purity << o->entropy << phase_name(r->phase);
    } else {
        for (int i = 0; i < 5; ++i) w << NAN;
        w << "failed";
    }
    w.end_row();
}

NessResult solve_ness(Context& ctx) {
    const ModelParams& p = ctx.cfg.model;
    NessResult r = propagate_to_ness(seeded_mixed_state(p.basis()), p, ctx.cfg.integrator);
    ctx.manifest["ness"] = {{"converged", r.converged},
                            {"polished", r.polished},
                            {"phase", phase_name(r.phase)},
                            {"omega0", r.omega0},
                            {"abs_psi0", std::abs(r.psi0)},
                            {"residual", r.residual},
                            {"t_final", r.t_final}};
    ctx.say(std::string("NESS: ") + phase_name(r.phase) + (r.converged ? " converged" : " NOT converged") +
            ", residual " + format_double(r.residual));
    return r;
}

void task_ness(Context& ctx) {
    const NessResult r = solve_ness(ctx);
    ctx.result.points = 1;
    CsvWriter w(ctx.file("ness.csv"), schema::phase_diagram);
    if (r.converged) {
        const ObservableSet o = observables(r.c0, 1e-6);
        write_observable_row(w, ctx.cfg.model, &r, &o);
    } else {
        ++ctx.result.failed;
        write_observable_row(w, ctx.cfg.model, nullptr, nullptr);
    }
    w.close();
    CsvWriter s(ctx.file("state.csv"), {"n", "m", "sigma", "sigma_p", "re", "im"});
    const LocalBasis& b = r.c0.basis;
    for (int f = 0; f < b.dim_rho(); ++f) {
        const ElementIndex e = b.unflatten(f);
        s << e.n << e.m << e.sigma << e.sigma_p << r.c0.c[f].real() << r.c0.c[f].imag();
        s.end_row();
    }
    s.close();
}

void task_phase_diagram(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const std::vector<ModelParams> grid = expand_grid(c);
    ScanOptions so;
    so.prop = c.integrator;
    so.warm_start = c.warm_start;
    so.chain_length = c.sweep.back().count;
    so.workers = c.workers;
    ctx.say("phase diagram: " + std::to_string(grid.size()) + " points on " + std::to_string(c.workers) + " workers");
    const std::vector<ScanEntry> entries = phase_scan(grid, so);
    ctx.result.points = static_cast<int>(entries.size());

    CsvWriter w(ctx.file("phase_diagram.csv"), schema::phase_diagram);
    json failures = json::array();
    int warm = 0, polished = 0;
    double worst_residual = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
        const ScanEntry& e = entries[i];
        warm += e.warm_started;
        if (e.ok()) {
            polished += e.ness.polished;
            worst_residual = std::max(worst_residual, e.ness.residual);
            write_observable_row(w, e.params, &e.ness, &e.obs);
        } else {
            ++ctx.result.failed;
            failures.push_back({{"index", i}, {"error", e.error.empty() ? "not converged" : e.error}});
            write_observable_row(w, e.params, nullptr, nullptr);
        }
    }
    w.close();

    // Cold-start spot checks of warm-started points.
    std::vector<size_t> spots;
    if (c.spot_check_every > 0)
        for (size_t i = 0; i < entries.size(); i += c.spot_check_every)
            if (entries[i].warm_started && entries[i].ok()) spots.push_back(i);
    std::vector<json> spot_json(spots.size());
    parallel_for(static_cast<int>(spots.size()), c.workers, [&](int s) {
        const ScanEntry& e = entries[spots[s]];
        json j{{"index", spots[s]}};
        try {
            const NessResult cold = propagate_to_ness(seeded_mixed_state(e.params.basis()), e.params, c.integrator);
            const ObservableSet o = observables(cold.c0, 1e-6);
            j["converged"] = cold.converged;
            j["d_n0"] = std::abs(o.n0 - e.obs.n0);
            j["d_abs_psi0"] = std::abs(std::abs(cold.psi0) - std::abs(e.ness.psi0));
            j["d_omega0"] = std::abs(cold.omega0 - e.ness.omega0);
            j["same_phase"] = cold.phase == e.ness.phase;
        } catch (const std::exception& ex) {
            j["error"] = ex.what();
        }
        spot_json[s] = j;
    });

    json omega_star = json::array();
    if (c.sweep.back().param == "J") {
        const int L = so.chain_length;
        for (size_t start = 0; start < entries.size(); start += L) {
            std::vector<ScanEntry> chain(entries.begin() + start, entries.begin() + start + L);
            const auto ws = critical_lasing_frequency(chain);
            omega_star.push_back({{"Omega", entries[start].params.Omega},
                                  {"omega_star", ws ? json(*ws) : json(nullptr)}});
        }
    }
    ctx.manifest["scan"] = {{"points", entries.size()},
                            {"failed", ctx.result.failed},
                            {"warm_start", c.warm_start},
                            {"warm_started_points", warm},
                            {"chain_length", so.chain_length},
                            {"polished_points", polished},
                            {"max_residual", worst_residual},
                            {"failures", failures},
                            {"spot_checks", spot_json},
                            {"omega_star", omega_star}};
}

void task_spectrum(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const NessResult r = solve_ness(ctx);
    const std::vector<Wavevector> path = c.k_path.build(c.model.d);
    ctx.result.points = static_cast<int>(path.size());
    if (!r.converged) {
        ctx.result.failed = ctx.result.points;
        return;
    }
    const std::vector<ModeSet> sets = mode_sets(r, c.model, path, c.workers);
    BranchTable table;
    try {
        table = classify_branches(sets, r.phase);
    } catch (const TrackingError& e) {
        ++ctx.result.failed;
        ctx.manifest["tracking_error"] = {{"message", e.what()}, {"k_from", e.k_from}, {"k_to", e.k_to}};
        table.band.clear();
        std::vector<int> tr;
        for (const ModeSet& m : sets) tr.push_back(m.trace_mode);
        table.band["trace"] = tr;
    }
    double pairing = 0.0, cond = 0.0;
    for (const ModeSet& m : sets) {
        pairing = std::max(pairing, pairing_defect(m.omega));
        cond = std::max(cond, m.condition);
    }
    const StabilityReport st = stability_check(sets, 1e-7 * c.model.Gamma_p);
    const std::vector<int> window = diffusive_window(sets, table);
    json win = nullptr;
    if (!window.empty()) win = {{"k_index_min", window.front()}, {"k_index_max", window.back()}};
    ctx.manifest["spectrum"] = {{"k_points", path.size()},
                                {"reference_k_index", table.reference},
                                {"pairing_defect", pairing},
                                {"max_condition", cond},
                                {"stable", st.stable},
                                {"max_im_omega", st.max_im},
                                {"worst_k_index", st.k_index},
                                {"diffusive_window", win},
                                {"frame", r.phase == Phase::SFP ? "rotating" : "lab"}};

    CsvWriter w(ctx.file("spectrum.csv"), schema::spectrum(c.model.d));
    for (size_t i = 0; i < sets.size(); ++i) {
        const ModeSet& m = sets[i];
        for (int a = 0; a < m.size(); ++a) {
            const ModeWeights& g = m.weights[a];
            w << static_cast<int>(i);
            for (double ka : m.k) w << ka;
            w << table.label_of(static_cast<int>(i), a) << m.omega[a].real() << m.omega[a].imag() << g.N.real()
              << g.N.imag() << g.U.real() << g.U.imag() << g.V.real() << g.V.imag() << g.C;
            w.end_row();
        }
    }
    w.close();
}

std::vector<double> omega_grid_for(const RunConfig& c, const NessResult& r) {
    if (c.omega_grid.min) {
        std::vector<double> w(c.omega_grid.count);
        const int n = c.omega_grid.count;
        for (int j = 0; j < n; ++j)
            w[j] = n == 1 ? *c.omega_grid.min : *c.omega_grid.min + (*c.omega_grid.max - *c.omega_grid.min) * j / (n - 1);
        return w;
    }
    const double center = c.omega_star ? *c.omega_star : (r.phase == Phase::SFP ? 0.0 : c.model.omega_c);
    return default_omega_grid(center, c.model.Gamma_p, c.omega_grid.count);
}

void task_response(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    const NessResult r = solve_ness(ctx);
    const std::vector<Wavevector> path = c.k_path.build(c.model.d);
    ctx.result.points = static_cast<int>(path.size());
    if (!r.converged) {
        ctx.result.failed = ctx.result.points;
        return;
    }
    const std::vector<ModeSet> sets = mode_sets(r, c.model, path, c.workers);
    Mirrors mir = default_mirrors(c.model);
    if (c.eta_L) mir.eta_L = *c.eta_L;
    if (c.eta_R) mir.eta_R = *c.eta_R;
    const std::vector<double> omega = omega_grid_for(c, r);
    const ResponseMap map = response_map(sets, r.c0, omega, mir, c.workers);
    const ObservableSet o = observables(r.c0, 1e-6);
    const DosReport d = dos(map, o.n0);
    double residue_dev = 0.0;
    for (const Residues& res : map.residues) residue_dev = std::max(residue_dev, std::abs(res.Z.sum() - d.expected));
    ctx.manifest["response"] = {{"omega_min", omega.front()},
                                {"omega_max", omega.back()},
                                {"omega_count", omega.size()},
                                {"omega_star", c.omega_star ? json(*c.omega_star) : json(nullptr)},
                                {"eta_L", complex_json(mir.eta_L)},
                                {"eta_R", complex_json(mir.eta_R)},
                                {"n0", o.n0},
                                {"residue_sum_max_deviation", residue_dev},
                                {"dos_window_integral", d.integral},
                                {"dos_window_exact", d.window_exact},
                                {"dos_expected", d.expected},
                                {"dos_tail_estimate", d.tail_estimate},
                                {"frame", r.phase == Phase::SFP ? "rotating" : "lab"}};

    CsvWriter w(ctx.file("response.csv"), schema::response);
    for (size_t ik = 0; ik < path.size(); ++ik) {
        for (int j = 0; j < map.n_omega(); ++j) {
            const int i = map.at(static_cast<int>(ik), j);
            w << static_cast<int>(ik) << omega[j] << map.G[i].real() << map.G[i].imag() << map.A[i]
              << std::norm(map.T[i]) << std::norm(map.R[i]) << std::norm(map.F[i]) << map.violation[i];
            w.end_row();
        }
    }
    w.close();
}

void task_equilibrium(Context& ctx) {
    const HardCoreParams& p = ctx.cfg.equilibrium;
    const HardCoreMeanField m = hc_meanfield(p);
    const std::vector<Wavevector> path = ctx.cfg.k_path.build(p.d());
    ctx.result.points = static_cast<int>(path.size());
    const double cs = sound_velocity(p);
    CsvWriter w(ctx.file("equilibrium.csv"), schema::equilibrium);
    for (const Wavevector& k : path) {
        const Eigen::Vector3cd ev = hc_bdg(p, k);
        double numeric = 0.0;
        for (int i = 0; i < 3; ++i) numeric = std::max(numeric, ev[i].real());
        w << norm_k(k) << hc_goldstone(p, k) << numeric << cs;
        w.end_row();
    }
    w.close();
    ctx.manifest["equilibrium"] = {{"n0", m.n0},
                                   {"psi0_sq", m.psi0_sq},
                                   {"omega_eq", m.omega_eq},
                                   {"energy_density", m.energy_density},
                                   {"xi", std::isfinite(m.xi) ? json(m.xi) : json(nullptr)},
                                   {"sound_velocity", cs}};
}

}  // namespace

std::optional<double> critical_lasing_frequency(const std::vector<ScanEntry>& chain) {
    for (const ScanEntry& e : chain)
        if (e.ok() && e.ness.phase == Phase::SFP) return e.ness.omega0;
    return std::nullopt;
}

RunResult run(const RunConfig& c, const Logger& log) {
    Context ctx{c, log, fs::path(c.output), json::object(), {}};
    std::error_code ec;
    fs::create_directories(ctx.dir, ec);
    if (ec || !fs::is_directory(ctx.dir)) throw RunError("cannot create output directory " + c.output);
    {
        std::ofstream cfg(ctx.dir / "config.yaml", std::ios::binary);
        if (!cfg) throw RunError("output directory " + c.output + " is not writable");
        cfg << serialize_config(c);
    }
    ctx.manifest["tool"] = "ddbh";
    ctx.manifest["version"] = DDBH_VERSION;
    ctx.manifest["task"] = task_name(c.task);
    ctx.manifest["config_hash"] = config_hash(c);
    ctx.manifest["simd_backend"] = simd::backend_name(simd::active_backend());
    ctx.manifest["workers"] = c.workers;

    switch (c.task) {
        case Task::Ness: task_ness(ctx); break;
        case Task::PhaseDiagram: task_phase_diagram(ctx); break;
        case Task::Spectrum: task_spectrum(ctx); break;
        case Task::Response: task_response(ctx); break;
        case Task::Equilibrium: task_equilibrium(ctx); break;
    }

    json files = json::array();
    for (const std::string& f : ctx.result.files) files.push_back(fs::path(f).filename().string());
    ctx.manifest["files"] = files;
    ctx.manifest["points"] = ctx.result.points;
    ctx.manifest["failed"] = ctx.result.failed;
    ctx.result.manifest = (ctx.dir / "manifest.json").string();
    std::ofstream mf(ctx.result.manifest, std::ios::binary);
    if (!mf) throw RunError("cannot write " + ctx.result.manifest);
    mf << ctx.manifest.dump(2) << '\n';
    return ctx.result;
}

}  // namespace ddbh
