#include "ddbh/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace ddbh {

namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& key, const std::string& msg) {
    std::string where;
    if (n.IsDefined() && n.Mark().line >= 0) where = "line " + std::to_string(n.Mark().line + 1) + ", ";
    throw ConfigError(where + "key '" + key + "': " + msg);
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& ctx) {
    if (!map.IsMap()) fail(map, ctx, "expected a mapping");
    for (const auto& kv : map) {
        const std::string key = kv.first.as<std::string>();
        if (!allowed.count(key)) fail(kv.first, ctx.empty() ? key : ctx + "." + key, "unknown key");
    }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key, const char* type) {
    if (!n.IsScalar()) fail(n, key, std::string("expected ") + type);
    try {
        return n.as<T>();
    } catch (const YAML::BadConversion&) {
        fail(n, key, std::string("expected ") + type + ", got '" + n.Scalar() + "'");
    }
}

template <class T>
void read(const YAML::Node& map, const char* name, const std::string& ctx, T& out, const char* type) {
    const YAML::Node n = map[name];
    if (n) out = scalar<T>(n, ctx + name, type);
}

void read_opt(const YAML::Node& map, const char* name, const std::string& ctx, std::optional<double>& out) {
    const YAML::Node n = map[name];
    if (n) out = scalar<double>(n, ctx + name, "a number");
}

void parse_model(const YAML::Node& m, ModelParams& p) {
    check_keys(m, {"J", "U", "hard_core", "n_max", "omega_c", "omega_at", "Omega", "Gamma_l", "Gamma_p", "gamma", "d"},
               "model");
    const std::string c = "model.";
    read(m, "J", c, p.J, "a number");
    read(m, "U", c, p.U, "a number");
    read(m, "hard_core", c, p.hard_core, "a boolean");
    read(m, "n_max", c, p.n_max, "an integer");
    read(m, "omega_c", c, p.omega_c, "a number");
    read_opt(m, "omega_at", c, p.omega_at);
    read(m, "Omega", c, p.Omega, "a number");
    read(m, "Gamma_l", c, p.Gamma_l, "a number");
    read(m, "Gamma_p", c, p.Gamma_p, "a number");
    read(m, "gamma", c, p.gamma, "a number");
    read(m, "d", c, p.d, "an integer");
    try {
        p.validate();
    } catch (const ParamError& e) {
        fail(m, "model", e.what());
    }
}

void parse_integrator(const YAML::Node& n, PropagateOptions& o) {
    check_keys(n, {"dt", "t_max", "tol", "window", "sample_dt", "psi_threshold", "polish", "polish_trigger"},
               "integrator");
    const std::string c = "integrator.";
    read(n, "dt", c, o.dt, "a number");
    read(n, "t_max", c, o.t_max, "a number");
    read(n, "tol", c, o.tol, "a number");
    read_opt(n, "window", c, o.window);
    read(n, "sample_dt", c, o.sample_dt, "a number");
    read(n, "psi_threshold", c, o.psi_threshold, "a number");
    read(n, "polish", c, o.polish, "a boolean");
    read(n, "polish_trigger", c, o.polish_trigger, "a number");
    auto positive = [&](double v, const char* key) {
        if (!(v > 0.0)) fail(n[key], c + key, "must be > 0");
    };
    positive(o.dt, "dt");
    positive(o.t_max, "t_max");
    positive(o.tol, "tol");
    positive(o.sample_dt, "sample_dt");
    positive(o.psi_threshold, "psi_threshold");
    if (o.window && !(*o.window > 0.0)) fail(n["window"], c + "window", "must be > 0");
}

Wavevector parse_point(const YAML::Node& n, const std::string& key) {
    if (!n.IsSequence()) fail(n, key, "expected a list of components");
    Wavevector k;
    for (const auto& x : n) k.push_back(scalar<double>(x, key, "a number"));
    return k;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

const char* task_name(Task t) {
    switch (t) {
        case Task::Ness: return "ness";
        case Task::PhaseDiagram: return "phase_diagram";
        case Task::Spectrum: return "spectrum";
        case Task::Response: return "response";
        case Task::Equilibrium: return "equilibrium";
    }
    return "?";
}

Task parse_task(const std::string& s) {
    for (Task t : {Task::Ness, Task::PhaseDiagram, Task::Spectrum, Task::Response, Task::Equilibrium})
        if (s == task_name(t)) return t;
    throw ConfigError("unknown task '" + s + "'");
}

std::vector<Wavevector> KPathSpec::build(int d) const {
    if (!points.empty()) return points;
    return diagonal_path(d, count, k_max, k_min);
}

bool RunConfig::operator==(const RunConfig& o) const {
    auto same_model = [](const ModelParams& a, const ModelParams& b) {
        return a.J == b.J && a.U == b.U && a.hard_core == b.hard_core && a.n_max == b.n_max &&
               a.omega_c == b.omega_c && a.omega_at == b.omega_at && a.Omega == b.Omega && a.Gamma_l == b.Gamma_l &&
               a.Gamma_p == b.Gamma_p && a.gamma == b.gamma && a.d == b.d;
    };
    auto same_prop = [](const PropagateOptions& a, const PropagateOptions& b) {
        return a.dt == b.dt && a.t_max == b.t_max && a.tol == b.tol && a.window == b.window &&
               a.sample_dt == b.sample_dt && a.psi_threshold == b.psi_threshold && a.polish == b.polish &&
               a.polish_trigger == b.polish_trigger;
    };
    const auto& e = equilibrium;
    const auto& f = o.equilibrium;
    return task == o.task && same_model(model, o.model) && sweep == o.sweep && same_prop(integrator, o.integrator) &&
           warm_start == o.warm_start && spot_check_every == o.spot_check_every && k_path == o.k_path &&
           omega_grid == o.omega_grid && omega_star == o.omega_star && eta_L == o.eta_L && eta_R == o.eta_R &&
           e.J == f.J && e.Ubar == f.Ubar && e.omega_c == f.omega_c && e.z == f.z && output == o.output &&
           workers == o.workers;
}

bool is_sweepable(const std::string& name) {
    static const std::set<std::string> names{"J", "U", "omega_c", "omega_at", "Omega", "Gamma_l", "Gamma_p", "gamma"};
    return names.count(name) > 0;
}

void set_param(ModelParams& p, const std::string& name, double v) {
    if (name == "J") p.J = v;
    else if (name == "U") p.U = v;
    else if (name == "omega_c") p.omega_c = v;
    else if (name == "omega_at") p.omega_at = v;
    else if (name == "Omega") p.Omega = v;
    else if (name == "Gamma_l") p.Gamma_l = v;
    else if (name == "Gamma_p") p.Gamma_p = v;
    else if (name == "gamma") p.gamma = v;
    else throw ConfigError("'" + name + "' is not a sweepable model parameter");
}

RunConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML syntax error: ") + e.what());
    }
    if (!root || root.IsNull()) throw ConfigError("empty config");
    check_keys(root, {"task", "model", "sweep", "integrator", "warm_start", "spot_check_every", "k_path", "omega_grid",
                      "omega_star", "mirrors", "equilibrium", "output", "workers"},
               "");
    RunConfig c;
    if (!root["task"]) fail(root, "task", "missing required key");
    try {
        c.task = parse_task(scalar<std::string>(root["task"], "task", "a string"));
    } catch (const ConfigError& e) {
        fail(root["task"], "task", e.what());
    }
    if (root["model"]) parse_model(root["model"], c.model);
    else if (c.task != Task::Equilibrium) fail(root, "model", "missing required key");

    if (const YAML::Node s = root["sweep"]) {
        if (!s.IsSequence()) fail(s, "sweep", "expected a list of axes");
        for (const auto& ax : s) {
            check_keys(ax, {"param", "min", "max", "count"}, "sweep");
            SweepAxis a;
            for (const char* k : {"param", "min", "max", "count"})
                if (!ax[k]) fail(ax, std::string("sweep.") + k, "missing required key");
            a.param = scalar<std::string>(ax["param"], "sweep.param", "a string");
            a.min = scalar<double>(ax["min"], "sweep.min", "a number");
            a.max = scalar<double>(ax["max"], "sweep.max", "a number");
            a.count = scalar<int>(ax["count"], "sweep.count", "an integer");
            if (!is_sweepable(a.param)) fail(ax["param"], "sweep.param", "unknown model parameter '" + a.param + "'");
            if (a.count < 1) fail(ax["count"], "sweep.count", "must be >= 1");
            c.sweep.push_back(a);
        }
    }
    if (c.task == Task::PhaseDiagram && c.sweep.empty()) fail(root, "sweep", "phase_diagram needs at least one axis");
    if (c.task != Task::PhaseDiagram && !c.sweep.empty()) fail(root["sweep"], "sweep", "only phase_diagram sweeps");

    if (const YAML::Node n = root["integrator"]) parse_integrator(n, c.integrator);
    read(root, "warm_start", "", c.warm_start, "a boolean");
    read(root, "spot_check_every", "", c.spot_check_every, "an integer");
    if (c.spot_check_every < 0) fail(root["spot_check_every"], "spot_check_every", "must be >= 0");

    if (const YAML::Node k = root["k_path"]) {
        check_keys(k, {"count", "k_min", "k_max", "points"}, "k_path");
        read(k, "count", "k_path.", c.k_path.count, "an integer");
        read(k, "k_min", "k_path.", c.k_path.k_min, "a number");
        read(k, "k_max", "k_path.", c.k_path.k_max, "a number");
        if (const YAML::Node pts = k["points"]) {
            if (!pts.IsSequence()) fail(pts, "k_path.points", "expected a list of wavevectors");
            for (const auto& pt : pts) {
                Wavevector w = parse_point(pt, "k_path.points");
                if (static_cast<int>(w.size()) != c.model.d) fail(pt, "k_path.points", "wavevector needs d components");
                c.k_path.points.push_back(w);
            }
        }
        if (c.k_path.count < 1) fail(k["count"], "k_path.count", "must be >= 1");
    }
    if (const YAML::Node g = root["omega_grid"]) {
        check_keys(g, {"min", "max", "count"}, "omega_grid");
        read_opt(g, "min", "omega_grid.", c.omega_grid.min);
        read_opt(g, "max", "omega_grid.", c.omega_grid.max);
        read(g, "count", "omega_grid.", c.omega_grid.count, "an integer");
        if (c.omega_grid.min.has_value() != c.omega_grid.max.has_value())
            fail(g, "omega_grid", "give both min and max or neither");
        if (c.omega_grid.min && !(*c.omega_grid.min < *c.omega_grid.max)) fail(g, "omega_grid", "needs min < max");
        if (c.omega_grid.count < 1) fail(g["count"], "omega_grid.count", "must be >= 1");
    }
    read_opt(root, "omega_star", "", c.omega_star);
    if (const YAML::Node m = root["mirrors"]) {
        check_keys(m, {"eta_L", "eta_R"}, "mirrors");
        read_opt(m, "eta_L", "mirrors.", c.eta_L);
        read_opt(m, "eta_R", "mirrors.", c.eta_R);
    }
    if (const YAML::Node e = root["equilibrium"]) {
        check_keys(e, {"J", "Ubar", "omega_c", "z"}, "equilibrium");
        read(e, "J", "equilibrium.", c.equilibrium.J, "a number");
        read(e, "Ubar", "equilibrium.", c.equilibrium.Ubar, "a number");
        read(e, "omega_c", "equilibrium.", c.equilibrium.omega_c, "a number");
        read(e, "z", "equilibrium.", c.equilibrium.z, "an integer");
        try {
            c.equilibrium.validate();
        } catch (const std::exception& ex) {
            fail(e, "equilibrium", ex.what());
        }
    }
    read(root, "output", "", c.output, "a string");
    read(root, "workers", "", c.workers, "an integer");
    if (c.workers < 1) fail(root["workers"], "workers", "must be >= 1");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "task" << YAML::Value << task_name(c.task);
    const ModelParams& m = c.model;
    out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "J" << YAML::Value << m.J;
    out << YAML::Key << "U" << YAML::Value << m.U;
    out << YAML::Key << "hard_core" << YAML::Value << m.hard_core;
    out << YAML::Key << "n_max" << YAML::Value << m.n_max;
    out << YAML::Key << "omega_c" << YAML::Value << m.omega_c;
    if (m.omega_at) out << YAML::Key << "omega_at" << YAML::Value << *m.omega_at;
    out << YAML::Key << "Omega" << YAML::Value << m.Omega;
    out << YAML::Key << "Gamma_l" << YAML::Value << m.Gamma_l;
    out << YAML::Key << "Gamma_p" << YAML::Value << m.Gamma_p;
    out << YAML::Key << "gamma" << YAML::Value << m.gamma;
    out << YAML::Key << "d" << YAML::Value << m.d;
    out << YAML::EndMap;
    if (!c.sweep.empty()) {
        out << YAML::Key << "sweep" << YAML::Value << YAML::BeginSeq;
        for (const SweepAxis& a : c.sweep) {
            out << YAML::BeginMap << YAML::Key << "param" << YAML::Value << a.param << YAML::Key << "min" << YAML::Value
                << a.min << YAML::Key << "max" << YAML::Value << a.max << YAML::Key << "count" << YAML::Value << a.count
                << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    const PropagateOptions& o = c.integrator;
    out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dt" << YAML::Value << o.dt;
    out << YAML::Key << "t_max" << YAML::Value << o.t_max;
    out << YAML::Key << "tol" << YAML::Value << o.tol;
    if (o.window) out << YAML::Key << "window" << YAML::Value << *o.window;
    out << YAML::Key << "sample_dt" << YAML::Value << o.sample_dt;
    out << YAML::Key << "psi_threshold" << YAML::Value << o.psi_threshold;
    out << YAML::Key << "polish" << YAML::Value << o.polish;
    out << YAML::Key << "polish_trigger" << YAML::Value << o.polish_trigger;
    out << YAML::EndMap;
    out << YAML::Key << "warm_start" << YAML::Value << c.warm_start;
    out << YAML::Key << "spot_check_every" << YAML::Value << c.spot_check_every;
    out << YAML::Key << "k_path" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "count" << YAML::Value << c.k_path.count;
    out << YAML::Key << "k_min" << YAML::Value << c.k_path.k_min;
    out << YAML::Key << "k_max" << YAML::Value << c.k_path.k_max;
    if (!c.k_path.points.empty()) {
        out << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
        for (const auto& k : c.k_path.points) {
            out << YAML::Flow << YAML::BeginSeq;
            for (double x : k) out << x;
            out << YAML::EndSeq;
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    out << YAML::Key << "omega_grid" << YAML::Value << YAML::BeginMap;
    if (c.omega_grid.min) out << YAML::Key << "min" << YAML::Value << *c.omega_grid.min;
    if (c.omega_grid.max) out << YAML::Key << "max" << YAML::Value << *c.omega_grid.max;
    out << YAML::Key << "count" << YAML::Value << c.omega_grid.count;
    out << YAML::EndMap;
    if (c.omega_star) out << YAML::Key << "omega_star" << YAML::Value << *c.omega_star;
    if (c.eta_L || c.eta_R) {
        out << YAML::Key << "mirrors" << YAML::Value << YAML::BeginMap;
        if (c.eta_L) out << YAML::Key << "eta_L" << YAML::Value << *c.eta_L;
        if (c.eta_R) out << YAML::Key << "eta_R" << YAML::Value << *c.eta_R;
        out << YAML::EndMap;
    }
    out << YAML::Key << "equilibrium" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "J" << YAML::Value << c.equilibrium.J;
    out << YAML::Key << "Ubar" << YAML::Value << c.equilibrium.Ubar;
    out << YAML::Key << "omega_c" << YAML::Value << c.equilibrium.omega_c;
    out << YAML::Key << "z" << YAML::Value << c.equilibrium.z;
    out << YAML::EndMap;
    out << YAML::Key << "output" << YAML::Value << c.output;
    out << YAML::Key << "workers" << YAML::Value << c.workers;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string config_hash(const RunConfig& c) {
    RunConfig canon = c;
    canon.output.clear();
    canon.workers = 1;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(serialize_config(canon))));
    return buf;
}

std::vector<ModelParams> expand_grid(const RunConfig& c) {
    std::vector<ModelParams> grid{c.model};
    for (const SweepAxis& a : c.sweep) {
        std::vector<ModelParams> next;
        next.reserve(grid.size() * a.count);
        for (const ModelParams& p : grid) {
            for (int i = 0; i < a.count; ++i) {
                ModelParams q = p;
                set_param(q, a.param, a.value(i));
                try {
                    q.validate();
                } catch (const ParamError& e) {
                    throw ConfigError("sweep over '" + a.param + "' produces invalid parameters: " + e.what());
                }
                next.push_back(q);
            }
        }
        grid = std::move(next);
    }
    return grid;
}

}  // namespace ddbh
