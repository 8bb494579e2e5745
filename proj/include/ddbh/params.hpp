#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ddbh/basis.hpp"

namespace ddbh {

struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Couplings of the driven cavity array. Rates are Lindblad rates, energies share their unit.
struct ModelParams {
    double J = 0.0;
    double U = 0.0;  // ignored when hard_core
    bool hard_core = true;
    int n_max = 1;   // forced to 1 when hard_core
    double omega_c = 1.0;
    std::optional<double> omega_at;  // default omega_c - z J
    double Omega = 0.0;
    double Gamma_l = 0.0;
    double Gamma_p = 1.0;
    double gamma = 0.0;
    int d = 2;

    int z() const { return 2 * d; }
    double G() const { return Omega * Omega / (Gamma_p * Gamma_l); }
    double Gamma_em() const { return 4.0 * Omega * Omega / Gamma_p; }
    double omega_at_value() const { return omega_at ? *omega_at : omega_c - z() * J; }
    int cutoff() const { return hard_core ? 1 : n_max; }
    double interaction() const { return hard_core ? 0.0 : U; }
    LocalBasis basis() const { return LocalBasis(cutoff()); }

    void validate() const;
};

/// Same parameters with the hopping chosen so that z J equals zJ.
ModelParams with_zJ(ModelParams p, double zJ);

}  // namespace ddbh
