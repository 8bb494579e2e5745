#include <arm_neon.h>

#include "ddbh/simd.hpp"

namespace ddbh::simd::detail {

void cmatvec_neon(int n, const double* a_re, const double* a_im, const double* x_re, const double* x_im,
                  double* y_re, double* y_im) {
    const int n2 = n & ~1;
    for (int i = 0; i < n; ++i) {
        const double* ar = a_re + static_cast<long>(i) * n;
        const double* ai = a_im + static_cast<long>(i) * n;
        float64x2_t sr = vdupq_n_f64(0.0);
        float64x2_t si = vdupq_n_f64(0.0);
        for (int j = 0; j < n2; j += 2) {
            const float64x2_t vr = vld1q_f64(ar + j);
            const float64x2_t vi = vld1q_f64(ai + j);
            const float64x2_t xr = vld1q_f64(x_re + j);
            const float64x2_t xi = vld1q_f64(x_im + j);
            sr = vfmaq_f64(sr, vr, xr);
            sr = vfmsq_f64(sr, vi, xi);
            si = vfmaq_f64(si, vr, xi);
            si = vfmaq_f64(si, vi, xr);
        }
        double tr = vaddvq_f64(sr), ti = vaddvq_f64(si);
        for (int j = n2; j < n; ++j) {
            tr += ar[j] * x_re[j] - ai[j] * x_im[j];
            ti += ar[j] * x_im[j] + ai[j] * x_re[j];
        }
        y_re[i] = tr;
        y_im[i] = ti;
    }
}

void pole_sum_neon(int n_poles, const double* p_re, const double* p_im, const double* z_re, const double* z_im,
                   int n_w, const double* w, double* g_re, double* g_im) {
    const int n2 = n_w & ~1;
    for (int j = 0; j < n2; j += 2) {
        const float64x2_t wv = vld1q_f64(w + j);
        float64x2_t sr = vdupq_n_f64(0.0);
        float64x2_t si = vdupq_n_f64(0.0);
        for (int a = 0; a < n_poles; ++a) {
            const float64x2_t dr = vsubq_f64(wv, vdupq_n_f64(p_re[a]));
            const float64x2_t di = vdupq_n_f64(-p_im[a]);
            const float64x2_t den = vfmaq_f64(vmulq_f64(di, di), dr, dr);
            const float64x2_t zr = vdupq_n_f64(z_re[a]);
            const float64x2_t zi = vdupq_n_f64(z_im[a]);
            const float64x2_t nr = vfmaq_f64(vmulq_f64(zi, di), zr, dr);
            const float64x2_t ni = vfmsq_f64(vmulq_f64(zi, dr), zr, di);
            sr = vaddq_f64(sr, vdivq_f64(nr, den));
            si = vaddq_f64(si, vdivq_f64(ni, den));
        }
        vst1q_f64(g_re + j, sr);
        vst1q_f64(g_im + j, si);
    }
    if (n2 < n_w) pole_sum_scalar(n_poles, p_re, p_im, z_re, z_im, n_w - n2, w + n2, g_re + n2, g_im + n2);
}

}  // namespace ddbh::simd::detail
