#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ddbh/equilibrium.hpp"
#include "ddbh/meanfield.hpp"
#include "ddbh/response.hpp"

namespace ddbh {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Task { Ness, PhaseDiagram, Spectrum, Response, Equilibrium };
const char* task_name(Task t);
Task parse_task(const std::string& s);

struct SweepAxis {
    std::string param;
    double min = 0.0, max = 0.0;
    int count = 1;

    double value(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
    bool operator==(const SweepAxis&) const = default;
};

struct KPathSpec {
    // Either a diagonal cut or explicit points.
    int count = 50;
    double k_min = 0.0;
    double k_max = 3.14159265358979323846;
    std::vector<Wavevector> points;

    std::vector<Wavevector> build(int d) const;
    bool operator==(const KPathSpec&) const = default;
};

struct OmegaGridSpec {
    std::optional<double> min, max;
    int count = 2001;
    bool operator==(const OmegaGridSpec&) const = default;
};

struct RunConfig {
    Task task = Task::Ness;
    ModelParams model;
    std::vector<SweepAxis> sweep;
    PropagateOptions integrator;
    bool warm_start = true;
    int spot_check_every = 20;
    KPathSpec k_path;
    OmegaGridSpec omega_grid;
    std::optional<double> omega_star;
    std::optional<double> eta_L, eta_R;
    HardCoreParams equilibrium;
    std::string output = "out";
    int workers = 1;

    bool operator==(const RunConfig&) const;
};

/// Parses a YAML document. Unknown keys, type mismatches and invalid values raise ConfigError
/// with the offending key and line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// YAML with every field spelled out; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Hex digest of the fields that affect results (output path and worker count excluded).
std::string config_hash(const RunConfig& c);

/// Model parameters for every grid point, row-major over the sweep axes (last axis fastest).
std::vector<ModelParams> expand_grid(const RunConfig& c);

/// Sets the named ModelParams field.
void set_param(ModelParams& p, const std::string& name, double value);
bool is_sweepable(const std::string& name);

}  // namespace ddbh
