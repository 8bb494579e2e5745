#include <cstdlib>
#include <cstring>

#include "ddbh/simd.hpp"

namespace ddbh::simd {

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::AVX2: return "avx2";
        case Backend::NEON: return "neon";
    }
    return "unknown";
}

bool backend_available(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::AVX2:
#if defined(DDBH_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::NEON:
#if defined(DDBH_HAVE_NEON_TU)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() {
    static const Backend chosen = [] {
        const char* env = std::getenv("DDBH_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (backend_available(Backend::AVX2)) return Backend::AVX2;
        if (backend_available(Backend::NEON)) return Backend::NEON;
        return Backend::Scalar;
    }();
    return chosen;
}

const Kernels& kernels(Backend b) {
    static const Kernels scalar{detail::cmatvec_scalar, detail::pole_sum_scalar};
#if defined(DDBH_HAVE_AVX2_TU)
    static const Kernels avx2{detail::cmatvec_avx2, detail::pole_sum_avx2};
    if (b == Backend::AVX2 && backend_available(b)) return avx2;
#endif
#if defined(DDBH_HAVE_NEON_TU)
    static const Kernels neon{detail::cmatvec_neon, detail::pole_sum_neon};
    if (b == Backend::NEON) return neon;
#endif
    return scalar;
}

}  // namespace ddbh::simd
