#include <doctest.h>

#include <cmath>
#include <vector>

#include "wsdecay/analysis.hpp"
#include "wsdecay/rng.hpp"

using namespace wsdecay;

namespace {

SurvivalSeries synthetic_series(double (*law)(double), double t_lo, double t_hi, int n) {
    SurvivalSeries s;
    for (int i = 0; i < n; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (n - 1);
        s.t.push_back(t);
        s.p.push_back(law(t));
    }
    return s;
}

} // namespace

TEST_CASE("power-law tail fit: exact round trip") {
    const auto series = synthetic_series(
        [](double t) { return std::pow(t / 50.0, -2.0) / 3.0; }, 10.0, 400.0, 120);
    const PowerLawFit fit = fit_power_tail(series, 0.0, 10.0, 400.0);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fit.t_heisenberg == doctest::Approx(50.0).epsilon(2e-3));
    CHECK(fit.residual < 1e-10);
    CHECK(!fit.low_confidence);
}

TEST_CASE("power-law fit: scale invariance of the exponent") {
    auto series = synthetic_series(
        [](double t) { return std::pow(t / 50.0, -2.0) / 3.0; }, 10.0, 400.0, 120);
    const PowerLawFit base = fit_power_tail(series, 0.0, 10.0, 400.0);
    for (auto& v : series.p) v *= 37.5;
    const PowerLawFit scaled = fit_power_tail(series, 0.0, 10.0, 400.0);
    CHECK(scaled.exponent == doctest::Approx(base.exponent).epsilon(1e-12));
    // with P -> cP the intercept shifts by ln c and T_H by c^{1/q}
    CHECK(scaled.t_heisenberg ==
          doctest::Approx(base.t_heisenberg * std::sqrt(37.5)).epsilon(1e-8));
}

TEST_CASE("power-law fit: shifted abscissa and window flags") {
    const auto series = synthetic_series(
        [](double t) { return std::pow((t - 8.0) / 50.0, -1.0) / 2.0; }, 20.0, 220.0, 101);
    const PowerLawFit fit = fit_power_tail(series, 8.0, 20.0, 220.0);
    CHECK(fit.exponent == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.t_heisenberg == doctest::Approx(50.0).epsilon(1e-6));

    const PowerLawFit narrow = fit_power_tail(series, 8.0, 150.0, 220.0);
    CHECK(narrow.low_confidence);

    SurvivalSeries bad = series;
    bad.p[50] = 0.0;
    CHECK_THROWS_AS(fit_power_tail(bad, 8.0, 20.0, 220.0), std::invalid_argument);
        CHECK_THROWS_AS(fit_power_tail(series, 30.0, 20.0, 220.0), std::invalid_argument);
}

TEST_CASE("exponential fit round trip") {
    const auto series = synthetic_series(
        [](double t) { return std::exp(-0.01 * t); }, 0.0, 1000.0, 200);
    const ExponentialFit fit = fit_exponential(series, 0.0, 1000.0);
    CHECK(fit.rate == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(fit.residual < 1e-10);

    const auto flat = synthetic_series([](double) { return 0.25; }, 0.0, 100.0, 50);
    const ExponentialFit zero = fit_exponential(flat, 0.0, 100.0);
    CHECK(std::abs(zero.rate) < 1e-12);
}

TEST_CASE("distribution comparison identifies the ensemble class") {
    SplitMix64 rng(2024);
    std::vector<double> goe(10000), gue(10000), gse(10000);
    for (std::size_t i = 0; i < goe.size(); ++i) {
        const double g1 = rng.normal(), g2 = rng.normal(), g3 = rng.normal(),
                     g4 = rng.normal();
        goe[i] = g1 * g1;
        gue[i] = 0.5 * (g1 * g1 + g2 * g2);
        gse[i] = 0.25 * (g1 * g1 + g2 * g2 + g3 * g3 + g4 * g4);
    }
    const auto c1 = compare_distributions(goe);
    const auto c2 = compare_distributions(gue);
    const auto c4 = compare_distributions(gse);
    CHECK(c1.best_nu == 1);
    CHECK(c2.best_nu == 2);
    CHECK(c4.best_nu == 4);
    CHECK(c1.ks_distance[0] < 0.02);
    CHECK(c2.ks_distance[1] < 0.02);
    CHECK(c4.ks_distance[2] < 0.02);

    // invariance under sample scaling
    std::vector<double> scaled = gue;
    for (auto& v : scaled) v *= 1234.5;
    const auto c2s = compare_distributions(scaled);
    CHECK(c2s.ks_distance[1] == doctest::Approx(c2.ks_distance[1]).epsilon(1e-12));

    CHECK_THROWS_AS(compare_distributions(std::vector<double>(100, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(compare_distributions(std::vector<double>(10, 0.5)),
                    std::invalid_argument);
}

TEST_CASE("distribution histogram integrates to the in-range mass") {
    SplitMix64 rng(5);
    std::vector<double> samples(20000);
    for (auto& s : samples) {
        const double g1 = rng.normal(), g2 = rng.normal();
        s = 0.5 * (g1 * g1 + g2 * g2);
    }
    const auto cmp = compare_distributions(samples);
    REQUIRE(cmp.histogram_density.size() == 40);
    double mass = 0.0;
    for (double d : cmp.histogram_density) mass += d * 0.1;
    CHECK(mass > 0.95);  // nearly all unit-mean chi^2_2 samples fall in 10^-3..10
    CHECK(mass <= 1.0 + 1e-12);
}

TEST_CASE("peak profile fit: noiseless round trip") {
    const double a = 1e-3, b = 1e-4, dw = 0.002, wb = 1.0;
    std::vector<double> omega, p;
    for (int i = 0; i < 41; ++i) {
        const double w = wb - 0.01 + 0.02 * i / 40.0;
        omega.push_back(w);
        p.push_back(peak_profile_model(w, a, b, dw, wb));
    }
    const PeakFit fit = fit_peak_profile(omega, p, wb);
    CHECK(fit.converged);
    CHECK(fit.a == doctest::Approx(a).epsilon(1e-3));
    CHECK(fit.b == doctest::Approx(b).epsilon(1e-3));
    CHECK(fit.delta_omega == doctest::Approx(dw).epsilon(1e-3));
    CHECK(fit.residual < 1e-10);
    CHECK(fit.peak_value() ==
          doctest::Approx(a / (std::sqrt(3.0) * dw) + b).epsilon(1e-6));

    CHECK_THROWS_AS(fit_peak_profile(std::vector<double>{1, 2, 3},
                                     std::vector<double>{1, 2, 3}, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_peak_profile(omega, p, 5.0), std::invalid_argument);
}

TEST_CASE("width scaling fit round trips and flags the Fourier comparator") {
    std::vector<double> t, w_sub, w_fourier;
    for (const double tt : {471.0, 942.0, 1885.0, 3770.0}) {
        t.push_back(tt);
        w_sub.push_back(0.01 * std::pow(tt, -1.45));
        w_fourier.push_back(0.01 * std::pow(tt, -1.0));
    }
    const WidthScalingFit sub = fit_width_scaling(t, w_sub);
    CHECK(sub.gamma == doctest::Approx(1.45).epsilon(1e-6));
    CHECK(sub.prefactor == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(sub.residual < 1e-10);
    const WidthScalingFit fourier = fit_width_scaling(t, w_fourier);
    CHECK(fourier.gamma == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(fit_width_scaling(std::vector<double>{1.0, 2.0, 3.0},
                                      std::vector<double>{0.1, 0.1, 0.1}),
                    std::invalid_argument);
}
