#include "ddbh/params.hpp"

#include <cmath>

namespace ddbh {

void ModelParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ParamError(std::string(name) + " must be finite and >= 0");
    };
    nonneg(Omega, "Omega");
    nonneg(Gamma_l, "Gamma_l");
    nonneg(gamma, "gamma");
    if (!(Gamma_p > 0.0) || !std::isfinite(Gamma_p)) throw ParamError("Gamma_p must be > 0");
    if (d < 1) throw ParamError("d must be >= 1");
    if (!hard_core && n_max < 2) throw ParamError("finite-U runs need n_max >= 2");
    if (!std::isfinite(J) || !std::isfinite(U) || !std::isfinite(omega_c)) throw ParamError("non-finite coupling");
    if (omega_at && !std::isfinite(*omega_at)) throw ParamError("non-finite omega_at");
}

ModelParams with_zJ(ModelParams p, double zJ) {
    p.J = zJ / p.z();
    return p;
}

}  // namespace ddbh
