#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "wsdecay/config.hpp"
#include "wsdecay/lattice.hpp"
#include "wsdecay/quadrature.hpp"
#include "wsdecay/rng.hpp"

using namespace wsdecay;
namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("de-symmetrized driving force at reference phases") {
    const auto par = LatticeParams::make(0.1, 1.0, 3.0, 1, 1);
    CHECK(driving_force(0.0, par) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(driving_force(pi / 2.0, par) == doctest::Approx(0.0).margin(1e-12));
    CHECK(driving_force(pi / 4.0, par) ==
          doctest::Approx(3.0 * (std::sqrt(2.0) / 2.0 + 1.0)).epsilon(1e-14));
}

TEST_CASE("driving force has zero average over one period") {
    const auto par = LatticeParams::make(0.1, 1.0, 3.0, 1, 1);
    const double avg = integrate([&](double t) { return driving_force(t, par); },
                                 par.t0, par.t0 + par.t_omega, 1e-14) /
                       par.t_omega;
    CHECK(std::abs(avg) < 1e-12);
}

TEST_CASE("t0 solves 2 sin(wt) = cos(2wt), smallest positive root") {
    // closed form: sin(w t0) = (sqrt(3)-1)/2
    CHECK(solve_t0(1.0) == doctest::Approx(0.374734).epsilon(1e-5));
    CHECK(solve_t0(2.0) == doctest::Approx(0.5 * solve_t0(1.0)).epsilon(1e-14));
    SplitMix64 rng(42);
    for (int i = 0; i < 50; ++i) {
        const double w = rng.uniform(0.05, 20.0);
        const double t0 = solve_t0(w);
        CHECK(t0 > 0.0);
        CHECK(std::abs(2.0 * std::sin(w * t0) - std::cos(2.0 * w * t0)) < 1e-12);
        CHECK(t0 < 2.0 * pi / w);  // within the first period
    }
}

TEST_CASE("displacement vanishes at t0 and is T-periodic") {
    const auto par = LatticeParams::make(0.1, 1.0, 3.0, 1, 1);
    CHECK(std::abs(displacement_k(par.t0, par)) < 1e-14);
    CHECK(std::abs(displacement_k(par.t0 + par.t_omega, par)) < 1e-12);
    SplitMix64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform(-30.0, 30.0);
        CHECK(std::abs(displacement_k(t + par.t_omega, par) - displacement_k(t, par)) < 1e-12);
    }
}

TEST_CASE("displacement equals the double integral of the ac force") {
    const auto par = LatticeParams::make(0.1, 1.0, 3.0, 1, 1);
    // independent evaluation: K(t) = ∫_{t0}^{t} dt' ∫_{t0}^{t'} F_ω dt''
    const auto impulse = [&](double t) {
        return integrate([&](double s) { return driving_force(s, par); }, par.t0, t, 1e-13);
    };
    for (const double t : {0.0, 0.9, 2.5, 5.0, 6.9}) {
        const double k_quad = integrate(impulse, par.t0, t, 1e-11);
        CHECK(displacement_k(t, par) == doctest::Approx(k_quad).epsilon(1e-8));
        CHECK(driving_impulse(t, par) == doctest::Approx(impulse(t)).epsilon(1e-9).margin(1e-11));
    }
    CHECK(displacement_k(0.0, par) == doctest::Approx(0.30275).epsilon(1e-4));
}

TEST_CASE("impulse G has vanishing average over one period") {
    const auto par = LatticeParams::make(0.1, 1.3, 2.0, 1, 1);
    const double avg = integrate([&](double t) { return driving_impulse(t, par); },
                                 par.t0, par.t0 + par.t_omega, 1e-14) /
                       par.t_omega;
    CHECK(std::abs(avg) < 1e-12);
}

TEST_CASE("resonant static force reproduces the reference value") {
    CHECK(resonant_static_force(1, 1, 1.0, 0.1) == doctest::Approx(0.0159155).epsilon(1e-5));
    CHECK(resonant_static_force(2, 1, 1.0, 0.1) == doctest::Approx(0.0318310).epsilon(1e-5));
    CHECK(resonant_static_force(1, 2, 1.0, 0.1) == doctest::Approx(0.00795775).epsilon(1e-5));
    CHECK_THROWS_AS(resonant_static_force(2, 4, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(resonant_static_force(0, 1, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("bloch frequency closes the resonance relation") {
    SplitMix64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const int q = 1 + static_cast<int>(rng.uniform() * 6);
        const int r = (q % 2 == 0) ? 1 : 1 + static_cast<int>(rng.uniform() * 3);
        if (std::gcd(q, r) != 1) continue;
        const double omega = rng.uniform(0.2, 4.0);
        const double hbar = rng.uniform(0.05, 0.5);
        const double f0 = resonant_static_force(q, r, omega, hbar);
        const double wb = bloch_frequency(f0, hbar);
        CHECK(std::abs(q * omega - r * wb) <= 1e-14 * q * omega);
    }
}

TEST_CASE("hbar from lattice depth") {
    CHECK(hbar_from_lattice_depth(500.0) == doctest::Approx(0.17889).epsilon(1e-4));
    CHECK(hbar_from_lattice_depth(16.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hbar_from_lattice_depth(1600.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK_THROWS_AS(hbar_from_lattice_depth(0.0), std::invalid_argument);
    CHECK_THROWS_AS(hbar_from_lattice_depth(-2.0), std::invalid_argument);
}

TEST_CASE("parameter construction and validation") {
    const auto par = LatticeParams::make(0.1, 1.0, 3.0, 1, 1);
    CHECK(par.a_omega == doctest::Approx(3.0));
    CHECK(par.f0 == doctest::Approx(0.0159155).epsilon(1e-5));
    CHECK(par.t_omega == doctest::Approx(2.0 * pi));
    CHECK(par.d == doctest::Approx(2.0 * pi));
    const auto overridden = LatticeParams::make(0.1, 1.0, 3.0, 1, 1, 0.02);
    CHECK(overridden.f0 == doctest::Approx(0.02));
    CHECK_THROWS_AS(LatticeParams::make(-0.1, 1.0, 3.0, 1, 1), std::invalid_argument);

    const auto spec = ResonanceSpec::rational(2, 1, 1.0, 0.1);
    CHECK(spec.omega_b == doctest::Approx(2.0));
    const auto irr = ResonanceSpec::irrational(1.0 / std::sqrt(2.0), 1.0);
    CHECK(irr.omega_b == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("config file parsing") {
    const auto cfg = parse_lattice_config_text(
        "# comment\nhbar = 0.1\nomega=1.0\nepsilon = 3\nq=1\nr = 1\nseed = 99\n");
    CHECK(cfg.hbar == doctest::Approx(0.1));
    CHECK(cfg.seed == 99);
    CHECK(!cfg.f0.has_value());
    const auto par = cfg.to_params();
    CHECK(par.f0 == doctest::Approx(0.0159155).epsilon(1e-5));

    CHECK_THROWS_WITH_AS(parse_lattice_config_text(""),
                         "config: missing required keys: hbar, omega, epsilon, q, r",
                         std::runtime_error);
    CHECK_THROWS_AS(parse_lattice_config_text("hbar=0.1\nomega=1\nepsilon=3\nq=1\nr=1\nbogus=2\n"),
                    std::runtime_error);
    CHECK_THROWS_AS(parse_lattice_config_text("hbar zzz\n"), std::runtime_error);
    // f0 override flows through
    const auto cfg2 = parse_lattice_config_text(
        "hbar=0.1\nomega=1\nepsilon=3\nq=1\nr=1\nf0=0.0225\n");
    CHECK(cfg2.to_params().f0 == doctest::Approx(0.0225));
}
