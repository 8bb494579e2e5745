#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ddbh/meanfield.hpp"
#include "oracles.hpp"

using namespace ddbh;

namespace {

ModelParams driven(double Omega, double zJ) {
    ModelParams p;
    p.Omega = Omega;
    p.Gamma_l = 0.05;
    p.gamma = 1e-3;
    p.Gamma_p = 1.0;
    return with_zJ(p, zJ);
}

}  // namespace

TEST_CASE("analytic IP state is the Lindbladian null vector") {
    for (double Om : {0.16, 0.5}) {
        for (double zJ : {0.0, 0.5, 1.0}) {
            const ModelParams p = driven(Om, zJ);
            const GutzwillerState a = analytic_ip_ness(p);
            CHECK(validate_state(a, 1e-12).empty());
            CHECK(stationary_residual(a, 0.0, p) < 1e-14);
            CHECK((a.c - oracle::null_state(p).c).norm() < 1e-10);
        }
    }
}

TEST_CASE("printed plus sign of the detuning coherence is not stationary") {
    const ModelParams p = driven(0.5, 0.5);
    GutzwillerState a = analytic_ip_ness(p);
    const double tr_before = trace(a).real();
    a.at(0, 1, 1, -1) = cplx(-a.at(0, 1, 1, -1).real(), a.at(0, 1, 1, -1).imag());
    a.at(1, 0, -1, 1) = std::conj(a.at(0, 1, 1, -1));
    CHECK(trace(a).real() == doctest::Approx(tr_before));
    CHECK(stationary_residual(a, 0.0, p) > 1e-3);
}

TEST_CASE("analytic state needs a drive") {
    CHECK_THROWS_AS(analytic_ip_ness(driven(0.0, 0.5)), InputError);
}

TEST_CASE("critical hopping estimate") {
    const auto zJc = critical_hopping_estimate(driven(0.16, 0.0));
    REQUIRE(zJc.has_value());
    CHECK(*zJc == doctest::Approx(0.5 * std::sqrt(4 * 0.16 * 0.16 / 0.05 - 1.0)));
    CHECK_FALSE(critical_hopping_estimate(driven(0.1, 0.0)).has_value());
}

TEST_CASE("decoupled sites follow the exact single-site dynamics") {
    ModelParams p = driven(0.5, 0.0);
    p.omega_at = 0.7;
    const GutzwillerState s0 = seeded_mixed_state(p.basis(), 0.05);
    Propagator prop(p);
    Eigen::VectorXcd c = s0.c;
    prop.run(c, 0.01, 1000);
    const Eigen::VectorXcd ref = oracle::dense_propagate(oracle::operator_lindbladian(p), s0.c, 10.0);
    CHECK((c - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("finite-U decoupled dynamics") {
    ModelParams p = driven(0.3, 0.0);
    p.hard_core = false;
    p.n_max = 3;
    p.U = 0.3;
    const GutzwillerState s0 = seeded_mixed_state(p.basis(), 0.02);
    Propagator prop(p);
    Eigen::VectorXcd c = s0.c;
    prop.run(c, 0.005, 2000);
    const Eigen::VectorXcd ref = oracle::dense_propagate(oracle::operator_lindbladian(p), s0.c, 10.0);
    CHECK((c - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("IP propagation converges to the analytic state") {
    const ModelParams p = driven(0.5, 0.5);
    const NessResult r = propagate_to_ness(seeded_mixed_state(p.basis()), p);
    REQUIRE(r.converged);
    CHECK(r.phase == Phase::IP);
    CHECK(r.omega0 == 0.0);
    CHECK((r.c0.c - analytic_ip_ness(p).c).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(max_growth_rate(r.c0, 0.0, p) < 1e-10);
}

TEST_CASE("IP propagation without polishing") {
    PropagateOptions o;
    o.polish = false;
    const ModelParams p = driven(0.5, 0.0);
    const NessResult r = propagate_to_ness(seeded_mixed_state(p.basis()), p, o);
    REQUIRE(r.converged);
    CHECK_FALSE(r.polished);
    CHECK((r.c0.c - analytic_ip_ness(p).c).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("SFP limit cycle") {
    const ModelParams p = driven(0.3, 3.0);
    const NessResult r = propagate_to_ness(seeded_mixed_state(p.basis()), p);
    REQUIRE(r.converged);
    CHECK(r.phase == Phase::SFP);
    CHECK(r.omega0 == doctest::Approx(-0.83935).epsilon(1e-4));
    CHECK(std::abs(r.psi0) == doctest::Approx(0.17843).epsilon(1e-4));
    CHECK(r.residual < 1e-12);
    CHECK(std::abs(trace(r.c0) - 1.0) < 1e-12);
    // The limit cycle is stationary in the rotating frame at any time.
    const GutzwillerState later = rotating_frame_transform(r.c0, r.omega0, 12.3);
    CHECK(stationary_residual(later, r.omega0, p) < 1e-12);
    CHECK(std::abs(std::abs(order_parameter(later)) - std::abs(r.psi0)) < 1e-14);
}

TEST_CASE("unpolished SFP run agrees with the polished fixed point") {
    const ModelParams p = driven(0.3, 3.0);
    PropagateOptions o;
    o.polish = false;
    o.t_max = 4000;
    const NessResult raw = propagate_to_ness(seeded_mixed_state(p.basis()), p, o);
    const NessResult pol = propagate_to_ness(seeded_mixed_state(p.basis()), p);
    CHECK(raw.phase == Phase::SFP);
    CHECK(raw.omega0 == doctest::Approx(pol.omega0).epsilon(1e-6));
    CHECK(std::abs(raw.psi0) == doctest::Approx(std::abs(pol.psi0)).epsilon(1e-6));
}

TEST_CASE("trace is conserved by RK4") {
    const ModelParams p = driven(0.3, 3.0);
    Propagator prop(p);
    Eigen::VectorXcd c = seeded_mixed_state(p.basis()).c;
    prop.run(c, 0.01, 20000);
    CHECK(std::abs(trace(GutzwillerState(p.basis(), c)) - 1.0) < 1e-9 * 200);
}

TEST_CASE("invalid initial state") {
    const ModelParams p = driven(0.3, 1.0);
    GutzwillerState s = seeded_mixed_state(p.basis());
    s.c *= 2.0;
    CHECK_THROWS_AS(propagate_to_ness(s, p), InputError);
    CHECK_THROWS_AS(propagate_to_ness(seeded_mixed_state(LocalBasis(2)), p), InputError);
}

TEST_CASE("limit-cycle frequency extraction") {
    std::vector<std::pair<double, cplx>> s;
    for (int i = 0; i < 400; ++i) s.emplace_back(0.05 * i, 0.2 * std::polar(1.0, 0.7 * 0.05 * i + 0.3));
    CHECK(extract_limit_cycle_frequency(s) == doctest::Approx(-0.7).epsilon(1e-12));

    std::vector<std::pair<double, cplx>> quiet;
    for (int i = 0; i < 10; ++i) quiet.emplace_back(0.05 * i, cplx(1e-6, 0.0));
    CHECK(extract_limit_cycle_frequency(quiet) == 0.0);

    auto uneven = s;
    uneven[5].first += 0.01;
    CHECK_THROWS_AS(extract_limit_cycle_frequency(uneven), InputError);

    std::vector<std::pair<double, cplx>> fast;
    for (int i = 0; i < 50; ++i) fast.emplace_back(1.0 * i, std::polar(0.2, 3.0 * i));
    CHECK_THROWS_AS(extract_limit_cycle_frequency(fast), SamplingError);
}

TEST_CASE("IP threshold and continuation") {
    const ModelParams p = driven(0.5, 0.0);
    const auto zJc = ip_instability_threshold(p, 0.5, 5.0, 1e-8);
    REQUIRE(zJc.has_value());
    CHECK(*zJc == doctest::Approx(2.7442).epsilon(1e-3));
    CHECK_FALSE(ip_instability_threshold(p, 0.1, 0.5).has_value());

    // Continue an SFP state down towards the threshold.
    const ModelParams q = with_zJ(p, *zJc + 0.5);
    const NessResult start = propagate_to_ness(seeded_mixed_state(q.basis()), q);
    REQUIRE(start.phase == Phase::SFP);
    std::vector<double> path;
    for (int i = 1; i <= 20; ++i) path.push_back(*zJc + 0.5 - 0.49 * i / 20.0);
    const auto chain = continue_in_zJ(start, p, path);
    for (const NessResult& r : chain) {
        REQUIRE(r.converged);
        CHECK(r.residual < 1e-11);
    }
    CHECK(std::abs(chain.back().psi0) < std::abs(chain.front().psi0));
}

TEST_CASE("slow decay just below the threshold still converges") {
    const ModelParams p = driven(0.16, 0.0);
    const double zJc = *ip_instability_threshold(p, 0.5, 3.0, 1e-10);
    const ModelParams q = with_zJ(p, 0.999 * zJc);
    const NessResult r = propagate_to_ness(seeded_mixed_state(q.basis()), q);
    REQUIRE(r.converged);
    CHECK(r.phase == Phase::IP);
    CHECK((r.c0.c - analytic_ip_ness(q).c).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("omega0 near threshold is close to the equilibrium value") {
    const ModelParams p = driven(0.16, 0.0);
    const double zJc = *ip_instability_threshold(p, 0.5, 3.0, 1e-9);
    const ModelParams q = with_zJ(p, zJc + 1.0);
    const NessResult start = propagate_to_ness(seeded_mixed_state(q.basis()), q);
    REQUIRE(start.phase == Phase::SFP);
    std::vector<double> path;
    for (int i = 1; i <= 60; ++i) path.push_back(zJc + 1.0 * std::pow(1e-4, i / 60.0));
    const auto chain = continue_in_zJ(start, p, path);
    const NessResult& last = chain.back();
    REQUIRE(last.converged);
    const double n0 = observables(last.c0).n0;
    const double w_eq = zJc * (2 * n0 - 1) + p.omega_c;
    MESSAGE("omega0 = " << last.omega0 << ", omega_eq = " << w_eq);
    CHECK(std::abs(last.omega0 - w_eq) < 0.02 * std::abs(w_eq));
}

TEST_CASE("phase scan is independent of the worker count") {
    std::vector<ModelParams> grid;
    for (double Om : {0.3, 0.5})
        for (double zJ : {0.5, 2.0, 3.5, 4.0}) grid.push_back(driven(Om, zJ));
    ScanOptions o;
    o.chain_length = 4;
    o.workers = 1;
    const auto a = phase_scan(grid, o);
    o.workers = 3;
    const auto b = phase_scan(grid, o);
    REQUIRE(a.size() == grid.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ok());
        CHECK(a[i].ness.c0.c == b[i].ness.c0.c);
        CHECK(a[i].ness.omega0 == b[i].ness.omega0);
        CHECK(a[i].warm_started == (i % 4 != 0));
    }
    CHECK(a[7].ness.phase == Phase::SFP);
    CHECK(a[0].ness.phase == Phase::IP);
}
