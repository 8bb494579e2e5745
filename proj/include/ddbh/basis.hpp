#pragma once

#include <stdexcept>
#include <string>

namespace ddbh {

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Labels of one density-matrix element c_{n,m,sigma,sigma'}.
struct ElementIndex {
    int n = 0;
    int m = 0;
    int sigma = -1;
    int sigma_p = -1;

    bool operator==(const ElementIndex&) const = default;
};

/// Photon states 0..n_max times a two-level emitter (sigma = -1, +1).
///
/// Flat order is row-major in (n, m, sigma, sigma'), with sigma' fastest.
class LocalBasis {
public:
    explicit LocalBasis(int n_max = 1);

    int n_max() const { return n_max_; }
    int local_dim() const { return 2 * (n_max_ + 1); }
    int dim_rho() const { return local_dim() * local_dim(); }

    int flat_index(int n, int m, int sigma, int sigma_p) const;
    int flat_index(const ElementIndex& e) const { return flat_index(e.n, e.m, e.sigma, e.sigma_p); }
    ElementIndex unflatten(int flat) const;

    // Row/column of the local density matrix for |n, sigma>.
    int local_index(int n, int sigma) const { return 2 * n + (sigma + 1) / 2; }

    // Charge n - m + (sigma - sigma')/2 of a flat element.
    int charge(int flat) const;

    bool operator==(const LocalBasis& o) const { return n_max_ == o.n_max_; }

private:
    int n_max_;
};

}  // namespace ddbh
