#pragma once

#include <stdexcept>

#include "ddbh/state.hpp"

namespace ddbh {

struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ObservableSet {
    double n0 = 0.0;
    double dn2 = 0.0;
    double Sz = 0.0;
    cplx Sminus = 0.0;
    double purity = 0.0;
    double entropy = 0.0;
    double rho_c = 0.0;
};

/// Local expectation values. Throws PositivityError if rho has an eigenvalue below -tol.
ObservableSet observables(const GutzwillerState& s, double tol = 1e-8);

}  // namespace ddbh
