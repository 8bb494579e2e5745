#pragma once

#include <vector>

namespace ddbh::simd {

enum class Backend { Scalar, AVX2, NEON };

const char* backend_name(Backend b);

/// True when the backend was compiled in and the running CPU supports it.
bool backend_available(Backend b);

/// Best available backend, chosen once at first use. DDBH_SIMD=scalar forces the reference kernels.
Backend active_backend();

/// y = A x for a dense n x n complex matrix stored row-major as split real/imaginary arrays.
using CMatVecFn = void (*)(int n, const double* a_re, const double* a_im, const double* x_re,
                           const double* x_im, double* y_re, double* y_im);

/// g_j = sum_a z_a / (w_j - p_a) for real frequencies w_j and complex poles p_a.
using PoleSumFn = void (*)(int n_poles, const double* p_re, const double* p_im, const double* z_re,
                           const double* z_im, int n_w, const double* w, double* g_re, double* g_im);

struct Kernels {
    CMatVecFn cmatvec;
    PoleSumFn pole_sum;
};

const Kernels& kernels(Backend b);
inline const Kernels& kernels() { return kernels(active_backend()); }

namespace detail {
void cmatvec_scalar(int, const double*, const double*, const double*, const double*, double*, double*);
void pole_sum_scalar(int, const double*, const double*, const double*, const double*, int, const double*, double*,
                     double*);
void cmatvec_avx2(int, const double*, const double*, const double*, const double*, double*, double*);
void pole_sum_avx2(int, const double*, const double*, const double*, const double*, int, const double*, double*,
                   double*);
void cmatvec_neon(int, const double*, const double*, const double*, const double*, double*, double*);
void pole_sum_neon(int, const double*, const double*, const double*, const double*, int, const double*, double*,
                   double*);
}  // namespace detail

}  // namespace ddbh::simd
