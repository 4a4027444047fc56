#pragma once

#include <array>
#include <span>
#include <vector>

#include "wsdecay/series.hpp"

namespace wsdecay {

/// Result of the log-log tail fit P ≈ ((t − t_shift)/T_H)^{−q}/(q+1).
struct PowerLawFit {
    double exponent = 0.0;      // −slope of log P vs log(t − t_shift)
    double t_heisenberg = 0.0;  // recovered from the intercept with q = round(exponent)
    double t_shift = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual = 0.0;      // rms of log residuals
    bool low_confidence = false;  // window spans less than one decade
};

struct ExponentialFit {
    double rate = 0.0;  // ν in P = e^{−νt}
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual = 0.0;
};

/// Resonance peak profile P(ω) = a/√((ω−ω_B)² + 3Δω²) + b with ω_B fixed.
struct PeakFit {
    double a = 0.0;
    double b = 0.0;
    double delta_omega = 0.0;
    double center = 0.0;
    double residual = 0.0;
    bool converged = false;
    int iterations = 0;

    double peak_value() const;  // model value at ω = ω_B
};

struct WidthScalingFit {
    double gamma = 0.0;  // Δω ∼ t^{−γ}
    double prefactor = 0.0;
    double residual = 0.0;
};

/// Linear least squares of log P against log(t − t_shift) over the window
/// (times relative to series start). All P in the window must be positive.
PowerLawFit fit_power_tail(const SurvivalSeries& series, double t_shift,
                           double window_lo, double window_hi);

/// Two-pass default window: last decade of available times, starting no
/// earlier than t_shift + 2·T_H from a first-pass estimate.
PowerLawFit fit_power_tail_auto(const SurvivalSeries& series, double t_shift);

ExponentialFit fit_exponential(const SurvivalSeries& series, double window_lo,
                               double window_hi);

/// Kolmogorov-Smirnov comparison of the unit-mean rescaled samples against
/// W_ν for ν ∈ {1, 2, 4}, plus the W(log₁₀ x) histogram (40 bins over
/// log₁₀ x ∈ [−3, 1]).
struct DistributionComparison {
    std::array<double, 3> ks_distance{};  // ν = 1, 2, 4
    int best_nu = 0;
    std::vector<double> histogram_log10_x;  // bin centers
    std::vector<double> histogram_density;  // empirical W(log10 x)
};

DistributionComparison compare_distributions(std::span<const double> samples);

/// Model value of the peak profile.
double peak_profile_model(double omega, double a, double b, double delta_omega,
                          double center);

/// Damped Gauss-Newton over (a, b, Δω), ω_B fixed; initial values from the
/// scan maximum, far-wing average and half-max width. Reports best-so-far
/// with converged = false after 500 iterations.
PeakFit fit_peak_profile(std::span<const double> omega, std::span<const double> p,
                         double omega_b);

/// Log-log regression of Δω against t.
WidthScalingFit fit_width_scaling(std::span<const double> t,
                                  std::span<const double> delta_omega);

} // namespace wsdecay
