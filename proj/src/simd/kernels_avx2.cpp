#include <immintrin.h>

#include "ddbh/simd.hpp"

namespace ddbh::simd::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void cmatvec_avx2(int n, const double* a_re, const double* a_im, const double* x_re, const double* x_im,
                  double* y_re, double* y_im) {
    const int n4 = n & ~3;
    for (int i = 0; i < n; ++i) {
        const double* ar = a_re + static_cast<long>(i) * n;
        const double* ai = a_im + static_cast<long>(i) * n;
        __m256d sr = _mm256_setzero_pd();
        __m256d si = _mm256_setzero_pd();
        for (int j = 0; j < n4; j += 4) {
            const __m256d vr = _mm256_loadu_pd(ar + j);
            const __m256d vi = _mm256_loadu_pd(ai + j);
            const __m256d xr = _mm256_loadu_pd(x_re + j);
            const __m256d xi = _mm256_loadu_pd(x_im + j);
            sr = _mm256_fmadd_pd(vr, xr, sr);
            sr = _mm256_fnmadd_pd(vi, xi, sr);
            si = _mm256_fmadd_pd(vr, xi, si);
            si = _mm256_fmadd_pd(vi, xr, si);
        }
        double tr = hsum(sr), ti = hsum(si);
        for (int j = n4; j < n; ++j) {
            tr += ar[j] * x_re[j] - ai[j] * x_im[j];
            ti += ar[j] * x_im[j] + ai[j] * x_re[j];
        }
        y_re[i] = tr;
        y_im[i] = ti;
    }
}

void pole_sum_avx2(int n_poles, const double* p_re, const double* p_im, const double* z_re, const double* z_im,
                   int n_w, const double* w, double* g_re, double* g_im) {
    const int n4 = n_w & ~3;
    for (int j = 0; j < n4; j += 4) {
        const __m256d wv = _mm256_loadu_pd(w + j);
        __m256d sr = _mm256_setzero_pd();
        __m256d si = _mm256_setzero_pd();
        for (int a = 0; a < n_poles; ++a) {
            const __m256d dr = _mm256_sub_pd(wv, _mm256_set1_pd(p_re[a]));
            const __m256d di = _mm256_set1_pd(-p_im[a]);
            const __m256d den = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
            const __m256d zr = _mm256_set1_pd(z_re[a]);
            const __m256d zi = _mm256_set1_pd(z_im[a]);
            const __m256d nr = _mm256_fmadd_pd(zr, dr, _mm256_mul_pd(zi, di));
            const __m256d ni = _mm256_fmsub_pd(zi, dr, _mm256_mul_pd(zr, di));
            sr = _mm256_add_pd(sr, _mm256_div_pd(nr, den));
            si = _mm256_add_pd(si, _mm256_div_pd(ni, den));
        }
        _mm256_storeu_pd(g_re + j, sr);
        _mm256_storeu_pd(g_im + j, si);
    }
    if (n4 < n_w) pole_sum_scalar(n_poles, p_re, p_im, z_re, z_im, n_w - n4, w + n4, g_re + n4, g_im + n4);
}

}  // namespace ddbh::simd::detail
