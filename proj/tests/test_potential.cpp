#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "isk/potential.hpp"

using namespace isk::potential;

TEST_CASE("profile construction and evaluation") {
    CHECK_THROWS_AS(PotentialProfile(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PotentialProfile(-0.5, 1.0), std::invalid_argument);

    PotentialProfile u(1.0, 1.25);
    CHECK(u.uprime(0.0) == doctest::Approx(1.125));
    CHECK(u.uprime(-40.0) == doctest::Approx(1.0));
    CHECK(u.uprime(40.0) == doctest::Approx(1.25));

    PotentialProfile v(0.0, 2.0);
    CHECK(v.uprime(0.0) == doctest::Approx(1.0));
    CHECK(v.uprime(-50.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("diffusion coefficient") {
    PotentialProfile u(1.0, 1.25);
    CHECK(u.q(1.0) == doctest::Approx(0.0));
    CHECK(u.q(1.25) == doctest::Approx(0.0));
    CHECK(PotentialProfile(1.0, 3.0).q(2.0) == doctest::Approx(0.5));
    CHECK(PotentialProfile(0.0, 2.0).q(1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(u.q(0.5), std::domain_error);
    CHECK_THROWS_AS(u.q(1.5), std::domain_error);
}

TEST_CASE("closed-form inverse") {
    CHECK(PotentialProfile(1.0, 3.0).invert_uprime(2.0) == doctest::Approx(0.0));
    CHECK(PotentialProfile(1.0, 1.25).invert_uprime(1.125) == doctest::Approx(0.0));
    CHECK(PotentialProfile(0.0, 2.0).invert_uprime(1.5) ==
          doctest::Approx(std::log(3.0)));
    PotentialProfile u(1.0, 2.0);
    CHECK(std::isinf(u.invert_uprime(1.0)));
    CHECK(u.invert_uprime(1.0) < 0);
    CHECK(std::isinf(u.invert_uprime(2.0)));
    CHECK(u.invert_uprime(2.0) > 0);
}

TEST_CASE("second derivative matches the diffusion coefficient") {
    std::mt19937 rng(7);
    // beyond |rho| ~ 12 the slope of u' underflows and the inverse loses
    // digits to roundoff, so the round-trip check stays inside that range
    std::uniform_real_distribution<double> dist(-12.0, 12.0);
    PotentialProfile u(1.0, 2.5);
    for (int i = 0; i < 200; ++i) {
        double rho = dist(rng);
        CHECK(u.usecond(rho) == doctest::Approx(u.q(u.uprime(rho))).epsilon(1e-12));
        CHECK(u.invert_uprime(u.uprime(rho)) == doctest::Approx(rho).epsilon(1e-9));
        CHECK(u.usecond(rho) > 0.0);
    }
}

TEST_CASE("tabulated profile round trip") {
    const char* path = "tab_profile_test.csv";
    {
        std::ofstream out(path);
        out << "rho,uprime\n";
        for (int i = 0; i <= 100; ++i) {
            double rho = -10.0 + 0.2 * i;
            out << rho << ',' << (1.0 + 2.0 * std::exp(rho)) / (1.0 + std::exp(rho))
                << '\n';
        }
    }
    auto t = TabulatedPotential::load_csv(path);
    PotentialProfile u(1.0, 2.0);
    for (double rho : {-5.0, -1.0, 0.0, 3.3, 8.0})
        CHECK(t.uprime(rho) == doctest::Approx(u.uprime(rho)).epsilon(1e-3));
    std::remove(path);

    CHECK_THROWS_AS(TabulatedPotential({0.0, 1.0}, {2.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(TabulatedPotential::load_csv("does_not_exist.csv"),
                    std::runtime_error);
}

TEST_CASE("flux admissibility checks") {
    auto id = FluxFunction::neg_identity();
    auto lg = FluxFunction::neg_log();
    CHECK(id.value(2.0) == doctest::Approx(-2.0));
    CHECK(id.neg_dvalue(7.0) == doctest::Approx(1.0));
    CHECK(lg.value(2.0) == doctest::Approx(-std::log(2.0)));
    CHECK(lg.neg_dvalue(2.0) == doctest::Approx(0.5));

    CHECK(validate_flux(id, 0.1, 10.0, 101).pass);
    auto rep = validate_flux(lg, 0.1, 10.0, 101);
    CHECK(rep.pass);
    CHECK(std::abs(rep.max_combined) < 1e-4);  // F'' + F'/x vanishes identically

    auto bad = FluxFunction::make_custom([](double x) { return x; });
    CHECK_FALSE(validate_flux(bad, 0.1, 10.0, 101).pass);
}
