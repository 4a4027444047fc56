#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "wsdecay/quadrature.hpp"
#include "wsdecay/rmt.hpp"

using namespace wsdecay;

TEST_CASE("chi2 densities at reference points") {
    CHECK(chi2_density(1.0, EnsembleClass{2}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    // nu=1: (1/sqrt(2*pi*s)) e^{-s/2}
    CHECK(chi2_density(1.0, EnsembleClass{1}) == doctest::Approx(0.241971).epsilon(1e-5));
    CHECK(chi2_density(0.0, EnsembleClass{2}) == doctest::Approx(1.0));
    CHECK(chi2_density(0.0, EnsembleClass{4}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(chi2_density(0.0, EnsembleClass{1}), std::domain_error);
    CHECK_THROWS_AS(chi2_density(1.0, EnsembleClass{3}), std::invalid_argument);
}

TEST_CASE("chi2 family is normalized with unit mean") {
    for (const int nu : {1, 2, 4}) {
        const EnsembleClass ens{nu};
        // substitute s = u^2 so the nu=1 endpoint singularity integrates cleanly
        const auto mass = integrate(
            [&](double u) { return 2.0 * u * chi2_density(u * u, ens); }, 1e-12, 16.0, 1e-12);
        const auto mean = integrate(
            [&](double u) { return 2.0 * u * u * u * chi2_density(u * u, ens); }, 1e-12, 16.0,
            1e-12);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(mean == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("chi2 CDFs match quadrature of the densities") {
    for (const int nu : {1, 2, 4}) {
        const EnsembleClass ens{nu};
        for (const double s : {0.3, 1.0, 2.7}) {
            const double mass = integrate(
                [&](double u) { return 2.0 * u * chi2_density(u * u, ens); }, 1e-12,
                std::sqrt(s), 1e-13);
            CHECK(chi2_cdf(s, ens) == doctest::Approx(mass).epsilon(1e-10));
        }
    }
}

TEST_CASE("width distribution: q=1 limit and exact normalization") {
    CHECK(width_density(0.0, 1) == doctest::Approx(1.0));
    CHECK(width_density(1e-4, 1) == doctest::Approx(1.0 - 4.0 / 3.0 * 1e-4).epsilon(1e-8));
    CHECK(width_density(0.0, 3) == doctest::Approx(0.0));
    // integral over [0, L] plus the exact q/(2L) tail (Π -> q/(2Γ²) beyond e^{-2Γ} support)
    for (int q = 1; q <= 5; ++q) {
        const double L = 100.0;
        const double mass =
            integrate([&](double g) { return width_density(g, q); }, 0.0, L, 1e-11) +
            q / (2.0 * L);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("width distribution matches q-fold differentiation of the bracket") {
    // Richardson-extrapolated central third derivative of
    // f(Γ) = (1 - e^{-2Γ})/(2Γ) at Γ = 0.5, q = 3
    const auto f = [](double g) { return (1.0 - std::exp(-2.0 * g)) / (2.0 * g); };
    const auto d3 = [&](double x, double h) {
        return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) /
               (2.0 * h * h * h);
    };
    const double x = 0.5;
    const double h = 1e-2;
    const double third = (4.0 * d3(x, h / 2.0) - d3(x, h)) / 3.0;
    const int q = 3;
    const double expected = -1.0 / 2.0 * x * x * third;  // (-1)^q/(q-1)! Γ^{q-1} d^q f
    CHECK(width_density(x, q) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("hypergeometric series reference values") {
    CHECK(hyp2f1(3, 7, 2, 0.0) == doctest::Approx(1.0));
    // 2F1(1,1;2;z) = -ln(1-z)/z
    CHECK(hyp2f1(1, 1, 2, 0.5) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-13));
    // 2F1(2,1;3;z) = 2(-ln(1-z) - z)/z^2
    CHECK(hyp2f1(2, 1, 3, 0.5) ==
          doctest::Approx(8.0 * (std::log(2.0) - 0.5)).epsilon(1e-13));
    // Euler transformation: 2F1(2,2;3;z) = (1-z)^{-1} 2F1(1,1;3;z) = 8 - 8 ln 2 at z = 1/2
    CHECK(hyp2f1(2, 2, 3, 0.5) == doctest::Approx(8.0 - 8.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(hyp2f1(2, 2, 3, 0.5) == doctest::Approx(2.454823).epsilon(1e-6));
    CHECK_THROWS_AS(hyp2f1(1, 1, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(hyp2f1(1, 1, 2, 1.0), std::domain_error);
    CHECK_THROWS_AS(hyp2f1(80, 80, 1, 0.999), std::runtime_error);
}

TEST_CASE("decay law: quadrature reference points") {
    const auto spec1 = RmtSpec::from_heisenberg(1, 1.0);
    CHECK(survival_quadrature(0.0, spec1) == doctest::Approx(1.0));
    // q=1, tau=1: closed elementary integral gives 2 ln 2 - 1
    CHECK(survival_quadrature(1.0, spec1) ==
          doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-10));
    const auto spec2 = RmtSpec::from_heisenberg(2, 1.0);
    CHECK(survival_quadrature(100.0, spec2) ==
          doctest::Approx(1.0 / (3.0 * 100.0 * 100.0)).epsilon(0.03));
}

TEST_CASE("closed form agrees with the quadrature oracle") {
    for (int q = 1; q <= 4; ++q) {
        const auto spec = RmtSpec::from_heisenberg(q, 1.0);
        for (const double tau : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
            CHECK(std::abs(survival_closed(tau, spec) - survival_quadrature(tau, spec)) <
                  1e-8);
        }
    }
}

TEST_CASE("closed form branch continuity at tau = 1") {
    for (int q = 1; q <= 6; ++q)
        CHECK(std::abs(detail::survival_branch_below(1.0, q) -
                       detail::survival_branch_above(1.0, q)) < 1e-9);
}

TEST_CASE("closed form: P(0) = 1 and monotone decay") {
    for (int q = 1; q <= 6; ++q) {
        const auto spec = RmtSpec::from_heisenberg(q, 1.0);
        CHECK(survival_closed(0.0, spec) == 1.0);
        double prev = 1.0;
        for (double tau = 1e-3; tau < 2e3; tau *= 1.35) {
            const double p = survival_closed(tau, spec);
            CHECK(p <= prev + 1e-12);
            CHECK(p > 0.0);
            prev = p;
        }
    }
}

TEST_CASE("algebraic asymptote") {
    CHECK(survival_asymptote(1.0, RmtSpec::from_heisenberg(1, 1.0)) == doctest::Approx(0.5));
    CHECK(survival_asymptote(10.0, RmtSpec::from_heisenberg(4, 1.0)) ==
          doctest::Approx(2e-5).epsilon(1e-12));
    for (int q = 1; q <= 4; ++q) {
        const auto spec = RmtSpec::from_heisenberg(q, 1.0);
        const double tau = 1e3;
        CHECK(survival_closed(tau, spec) / survival_asymptote(tau, spec) ==
              doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("spec consistency between Heisenberg time and level spacing") {
    const auto spec = RmtSpec::from_spacing(2, 0.0118, 0.1);
    CHECK(spec.t_heisenberg * (*spec.delta) ==
          doctest::Approx(2.0 * std::numbers::pi * 0.1).epsilon(1e-13));
    CHECK_THROWS_AS(RmtSpec::from_heisenberg(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RmtSpec::from_heisenberg(1, -1.0), std::invalid_argument);
}
