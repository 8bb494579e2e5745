#include "ddbh/simd.hpp"

namespace ddbh::simd::detail {

void cmatvec_scalar(int n, const double* a_re, const double* a_im, const double* x_re, const double* x_im,
                    double* y_re, double* y_im) {
    for (int i = 0; i < n; ++i) {
        const double* ar = a_re + static_cast<long>(i) * n;
        const double* ai = a_im + static_cast<long>(i) * n;
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < n; ++j) {
            sr += ar[j] * x_re[j] - ai[j] * x_im[j];
            si += ar[j] * x_im[j] + ai[j] * x_re[j];
        }
        y_re[i] = sr;
        y_im[i] = si;
    }
}

void pole_sum_scalar(int n_poles, const double* p_re, const double* p_im, const double* z_re, const double* z_im,
                     int n_w, const double* w, double* g_re, double* g_im) {
    for (int j = 0; j < n_w; ++j) {
        double sr = 0.0, si = 0.0;
        for (int a = 0; a < n_poles; ++a) {
            const double dr = w[j] - p_re[a];
            const double di = -p_im[a];
            const double den = dr * dr + di * di;
            sr += (z_re[a] * dr + z_im[a] * di) / den;
            si += (z_im[a] * dr - z_re[a] * di) / den;
        }
        g_re[j] = sr;
        g_im[j] = si;
    }
}

}  // namespace ddbh::simd::detail
