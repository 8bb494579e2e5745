#include "ddbh/basis.hpp"

namespace ddbh {

namespace {

bool valid_spin(int s) { return s == -1 || s == 1; }

}  // namespace

LocalBasis::LocalBasis(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw IndexError("n_max must be >= 1, got " + std::to_string(n_max));
}

int LocalBasis::flat_index(int n, int m, int sigma, int sigma_p) const {
    if (n < 0 || n > n_max_ || m < 0 || m > n_max_ || !valid_spin(sigma) || !valid_spin(sigma_p)) {
        throw IndexError("element (" + std::to_string(n) + "," + std::to_string(m) + "," +
                         std::to_string(sigma) + "," + std::to_string(sigma_p) +
                         ") outside basis with n_max=" + std::to_string(n_max_));
    }
    return ((n * (n_max_ + 1) + m) * 2 + (sigma + 1) / 2) * 2 + (sigma_p + 1) / 2;
}

ElementIndex LocalBasis::unflatten(int flat) const {
    if (flat < 0 || flat >= dim_rho()) throw IndexError("flat index " + std::to_string(flat) + " out of range");
    ElementIndex e;
    e.sigma_p = (flat % 2) * 2 - 1;
    flat /= 2;
    e.sigma = (flat % 2) * 2 - 1;
    flat /= 2;
    e.m = flat % (n_max_ + 1);
    e.n = flat / (n_max_ + 1);
    return e;
}

int LocalBasis::charge(int flat) const {
    const ElementIndex e = unflatten(flat);
    return e.n - e.m + (e.sigma - e.sigma_p) / 2;
}

}  // namespace ddbh
