#pragma once

#include <optional>

namespace wsdecay {

/// Gaussian ensemble class: ν = 1 (GOE), 2 (GUE), 4 (GSE).
struct EnsembleClass {
    int nu = 2;
    void validate() const;
};

/// Channel count and Heisenberg time for the open-system decay laws.
/// τ = t / t_heisenberg is the only time variable that enters.
struct RmtSpec {
    int q = 1;
    double t_heisenberg = 1.0;
    std::optional<double> delta;  // mean level spacing, T_H = 2πħ/Δ
    std::optional<double> hbar;

    static RmtSpec from_heisenberg(int q, double t_heisenberg);
    static RmtSpec from_spacing(int q, double delta, double hbar);
    void validate() const;
};

/// Unit-mean χ²_ν density W_ν(s) = (ν/2)^{ν/2} s^{ν/2−1} e^{−νs/2} / Γ(ν/2).
/// Throws std::domain_error for ν = 1 at s = 0 (the density diverges there).
double chi2_density(double s, const EnsembleClass& ensemble);

/// CDF of the unit-mean χ²_ν family (closed forms for ν = 1, 2, 4).
double chi2_cdf(double s, const EnsembleClass& ensemble);

/// CUE width distribution for q channels, evaluated through the integral
/// representation Π(Γ) = (2^q Γ^{q−1}/(q−1)!) ∫₀¹ u^q e^{−2Γu} du
/// (identical to the q-th derivative form), via the incomplete gamma
/// closed form Π(Γ) = q·P(q+1, 2Γ) / (2Γ²).
double width_density(double gamma_s, int q);

/// Decay law by direct quadrature of the two-variable integral after the
/// delta constraint is collapsed (v = 2τ + u):
/// P = ∫ du (τ+u)/(2τ) · ((1+u)/(1+2τ+u))^q over u ∈ [max(−1, 1−2τ), 1].
/// Independent oracle for survival_closed.
double survival_quadrature(double t, const RmtSpec& spec);

/// Decay law in hypergeometric closed form, P = (1+τ)^{−q} f_≶(τ),
/// with the τ ≥ 1 branch used at τ = 1.
double survival_closed(double t, const RmtSpec& spec);

/// Algebraic long-time asymptote τ^{−q}/(q+1).
double survival_asymptote(double t, const RmtSpec& spec);

/// Gauss hypergeometric series ₂F₁(a,b;c;z) for integer a,b and positive
/// integer c, 0 ≤ z < 1. Terms are summed until below 1e−15 of the partial
/// sum; more than 10⁴ terms throws (unreachable for the decay-law branches,
/// whose arguments satisfy z ≤ 1/2).
double hyp2f1(int a, int b, int c, double z);

namespace detail {

/// Regularized lower incomplete gamma P(a, x) for integer a ≥ 1.
double gamma_p_int(int a, double x);

/// The two hypergeometric branches of the closed-form decay law, exposed
/// for branch-continuity checks at τ = 1.
double survival_branch_below(double tau, int q);
double survival_branch_above(double tau, int q);

} // namespace detail

} // namespace wsdecay
