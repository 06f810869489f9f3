#include "doctest.h"

#include <cmath>
#include <vector>

#include "isk/diagnostics.hpp"
#include "isk/flow.hpp"
#include "isk/stationary.hpp"

using namespace isk;
using namespace isk::diagnostics;

namespace {

potential::FluxFunction flux_id = potential::FluxFunction::neg_identity();

struct NodalProfile {
    std::vector<double> x, f;
};

NodalProfile sample(const stationary::StationaryProfile& s, int pts) {
    NodalProfile p;
    p.x.resize(pts);
    p.f.resize(pts);
    for (int i = 0; i < pts; ++i) {
        p.x[i] = s.x_lo + (s.x_hi - s.x_lo) * i / (pts - 1);
        p.f[i] = s.eval(p.x[i]);
    }
    return p;
}

}  // namespace

TEST_CASE("radial inversion limits") {
    auto s = stationary::stationary_pn({2, 1, 3.0, 2.0});
    auto p = sample(s, 801);
    potential::PotentialProfile u(1.0, 3.0);
    auto rho = uniform_rho_grid(25.0, 1001);
    auto curve = reconstruct_vprime(p.x, p.f, u, rho);
    CHECK(curve.vprime.front() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(curve.vprime.back() == doctest::Approx(2.0).epsilon(1e-4));
    for (size_t i = 1; i < curve.vprime.size(); ++i)
        CHECK(curve.vprime[i] >= curve.vprime[i - 1] - 1e-12);
    CHECK(inversion_defect(curve, p.x, p.f, u) <= 1e-8);
}

TEST_CASE("blow-up inversion approaches the contact point") {
    auto s = stationary::stationary_pn({2, 1, 1.2, 2.0});
    auto p = sample(s, 801);
    potential::PotentialProfile u(1.0, 1.2);
    auto rho = uniform_rho_grid(30.0, 1201);
    auto curve = reconstruct_vprime(p.x, p.f, u, rho);
    CHECK(lambda_estimate(curve) == doctest::Approx(s.lambda).epsilon(1e-3));
    CHECK(curve.vprime.front() == doctest::Approx(1.07335).epsilon(1e-3));
}

TEST_CASE("identity classes invert to the potential itself") {
    // alpha = beta makes the profile the identity, so v' = u'
    std::vector<double> x(401), f(401);
    for (int i = 0; i < 401; ++i) x[i] = f[i] = 1.0 + i / 400.0;
    potential::PotentialProfile u(1.0, 2.0);
    auto rho = uniform_rho_grid(15.0, 301);
    auto curve = reconstruct_vprime(x, f, u, rho);
    for (size_t i = 0; i < rho.size(); ++i)
        CHECK(curve.vprime[i] == doctest::Approx(u.uprime(rho[i])).epsilon(1e-10));
}

TEST_CASE("cone exponent at a tangent contact") {
    auto s = stationary::stationary_pn({2, 1, 1.25, 2.0});
    potential::PotentialProfile u(1.0, 1.25);
    auto rho = uniform_rho_grid(45.0, 4001);
    auto curve = reconstruct_vprime([&](double x) { return s.eval(x); }, 1.0, 2.0, u,
                                    rho);
    auto fit = fit_cone_exponent(curve, 1.0);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.1));
    CHECK(fit.coefficient == doctest::Approx(std::sqrt(0.5)).epsilon(0.05));
    CHECK(fit.r2 > 0.999);
}

TEST_CASE("cone exponent about an interior contact point") {
    auto s = stationary::stationary_pn({2, 1, 1.2, 2.0});
    potential::PotentialProfile u(1.0, 1.2);
    auto rho = uniform_rho_grid(45.0, 4001);
    auto curve = reconstruct_vprime([&](double x) { return s.eval(x); }, 1.0, 2.0, u,
                                    rho);
    auto fit = fit_cone_exponent(curve, s.lambda);
    CHECK(fit.exponent == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("smooth profiles decay at the linear rate instead") {
    auto s = stationary::stationary_pn({2, 1, 3.0, 2.0});
    potential::PotentialProfile u(1.0, 3.0);
    auto rho = uniform_rho_grid(45.0, 4001);
    auto curve = reconstruct_vprime([&](double x) { return s.eval(x); }, 1.0, 2.0, u,
                                    rho);
    auto fit = fit_cone_exponent(curve, 1.0);  // about the domain endpoint
    CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.1));

    RadialCurve tiny;
    tiny.rho = {0.0, 1.0};
    tiny.vprime = {1.5, 1.6};
    CHECK_THROWS_AS(fit_cone_exponent(tiny, 1.0), InsufficientResolution);
}

TEST_CASE("oscillation and pole coefficient") {
    potential::PotentialProfile u(1.0, 1.2);
    auto rho = uniform_rho_grid(25.0, 2001);

    auto s_limit = stationary::stationary_pn({2, 1, 1.2, 2.0});
    auto limit = reconstruct_vprime([&](double x) { return s_limit.eval(x); }, 1.0, 2.0,
                                    u, rho);
    RadialCurve initial;  // chord profile f0(x) = 1 + (x-1)*0.2 inverted exactly
    initial.rho = limit.rho;
    for (double r : rho) initial.vprime.push_back(1.0 + (u.uprime(r) - 1.0) / 0.2);
    auto op = oscillation_and_pole(limit, initial);
    CHECK(op.pole_coeff == doctest::Approx(s_limit.lambda - 1.0).epsilon(2e-2));

    auto zero = oscillation_and_pole(limit, limit);
    CHECK(zero.osc == doctest::Approx(0.0));
    CHECK(zero.pole_coeff == doctest::Approx(0.0));
}

TEST_CASE("conic oscillation is finite and window-stable") {
    potential::PotentialProfile u(1.0, 1.25);
    auto s = stationary::stationary_pn({2, 1, 1.25, 2.0});
    double osc_prev = -1.0;
    for (double r : {20.0, 40.0}) {
        auto rho = uniform_rho_grid(r, int(80 * r) + 1);
        auto limit = reconstruct_vprime([&](double x) { return s.eval(x); }, 1.0, 2.0, u,
                                        rho);
        RadialCurve initial;
        initial.rho = limit.rho;
        for (double rr : rho)
            initial.vprime.push_back(1.0 + (u.uprime(rr) - 1.0) / 0.25);
        auto op = oscillation_and_pole(limit, initial);
        CHECK(std::abs(op.pole_coeff) < 2e-3);
        if (osc_prev >= 0.0) CHECK(op.osc == doctest::Approx(osc_prev).epsilon(1e-3));
        osc_prev = op.osc;
    }
}

TEST_CASE("trace profile boundedness") {
    auto s = stationary::stationary_pn({2, 1, 3.0, 2.0});
    auto p = sample(s, 801);
    potential::PotentialProfile u(1.0, 3.0);
    auto rho = uniform_rho_grid(20.0, 801);
    auto tr = trace_profile(p.x, p.f, u, rho, 2, 0, false);
    for (size_t i = 0; i < tr.values.size(); ++i) {
        CHECK_FALSE(tr.blown_up[i]);
        CHECK(tr.values[i] > 0.0);
        CHECK(tr.values[i] < 50.0);
    }

    // identity classes have trace exactly n
    std::vector<double> x(401), f(401);
    for (int i = 0; i < 401; ++i) x[i] = f[i] = 1.0 + i / 400.0;
    potential::PotentialProfile ui(1.0, 2.0);
    auto rho_mid = uniform_rho_grid(5.0, 101);
    auto tri = trace_profile(x, f, ui, rho_mid, 2, 0, false);
    for (double v : tri.values) CHECK(v == doctest::Approx(2.0).epsilon(1e-6));

    // a flat region reports the blow-up locus
    auto sb = stationary::stationary_pn({2, 1, 1.2, 2.0});
    auto pb = sample(sb, 801);
    potential::PotentialProfile ub(1.0, 1.2);
    auto rho_low = uniform_rho_grid(40.0, 401);
    auto trb = trace_profile(pb.x, pb.f, ub, rho_low, 2, 0, false);
    bool any_blown = false;
    for (char b : trb.blown_up) any_blown |= (b != 0);
    CHECK(any_blown);
}

TEST_CASE("flow limit lambda matches the algebraic root") {
    flow::FlowProblem problem = {classes::PnProblem{2, 1, 1.2, 2.0}, flux_id};
    auto grid = problem.default_grid(400);
    flow::SchemeConfig scheme;
    scheme.exec = flow::Exec::Serial;
    scheme.steady_tol = 1e-7;
    auto res = flow::evolve(problem, grid, scheme);
    REQUIRE(res.converged);
    std::vector<double> x(grid.points);
    for (int i = 0; i < grid.points; ++i) x[i] = grid.x(i);
    potential::PotentialProfile u(1.0, 1.2);
    auto rho = uniform_rho_grid(25.0, 1001);
    auto curve = reconstruct_vprime(x, res.state.values, u, rho);
    // the nodal inversion resolves the contact point to one grid spacing,
    // 2.5e-3 here; the refined extraction below grid resolution lives in the
    // obstacle module and is exercised by the acceptance gate
    CHECK(lambda_estimate(curve) ==
          doctest::Approx(stationary::solve_lambda_pn(problem.pn())).epsilon(5e-3));
}
