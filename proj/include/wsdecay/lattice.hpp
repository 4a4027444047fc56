#pragma once

#include <cstdint>
#include <optional>

namespace wsdecay {

/// All parameters of the ac-dc driven lattice H = p^2/2 + cos(x) + F(t)·x
/// in scaled units (lattice period d = 2π, unit potential depth).
/// The ac part is the de-symmetrized drive F_ω(t) = A_ω(cos ωt + sin 2ωt).
struct LatticeParams {
    double hbar = 0.1;      // scaled Planck constant
    double omega = 1.0;     // driving frequency
    double epsilon = 3.0;   // scaled amplitude ε = A_ω/ω²
    double a_omega = 3.0;   // driving amplitude A_ω = ε·ω²
    double f0 = 0.0;        // static tilt force F0
    int q = 1;              // resonance channel integer, q·ω = r·ω_B
    int r = 1;              // resonance integer, coprime with q
    double t0 = 0.0;        // phase origin: 2 sin(ω t0) = cos(2ω t0)
    double t_omega = 0.0;   // driving period 2π/ω
    double d = 0.0;         // lattice period (always 2π)

    /// Build a fully derived, validated parameter set. f0 defaults to the
    /// resonant value q·ω·ħ/(2π·r); pass f0_override for off-resonant runs.
    static LatticeParams make(double hbar, double omega, double epsilon,
                              int q, int r,
                              std::optional<double> f0_override = std::nullopt);

    /// Throws std::invalid_argument when any invariant is broken.
    void validate() const;
};

/// Frequency-ratio bookkeeping for q·ω = r·ω_B resonances.
struct ResonanceSpec {
    enum class Kind { rational, irrational };
    Kind kind = Kind::rational;
    int q = 1;              // rational case only
    int r = 1;
    double ratio = 1.0;     // ω/ω_B
    double omega_b = 0.0;   // Bloch frequency d·F0/ħ

    static ResonanceSpec rational(int q, int r, double omega, double hbar);
    static ResonanceSpec irrational(double ratio, double omega);
    void validate(double omega) const;
};

/// Smallest positive root of 2 sin(ω t0) = cos(2ω t0).
/// Reduces to 2s² + 2s − 1 = 0 in s = sin(ω t0), so ω t0 = asin((√3−1)/2).
double solve_t0(double omega);

/// Ac force F_ω(t) = A_ω (cos ωt + sin 2ωt). Total force is F0 + this.
double driving_force(double t, const LatticeParams& params);

/// First integral G_ω(t) = ∫_{t0}^{t} F_ω dt′; its time-average over one
/// period vanishes because of the t0 condition.
double driving_impulse(double t, const LatticeParams& params);

/// Oscillating frame displacement
/// K_ω(t) = −(ε/4)(4cos ωt + sin 2ωt − 4cos ωt0 − sin 2ωt0),
/// the second integral of F_ω; periodic with period T_ω and K_ω(t0) = 0.
double displacement_k(double t, const LatticeParams& params);

/// Bloch frequency ω_B = d·F0/ħ with d = 2π.
double bloch_frequency(double f0, double hbar);

/// Static force making q·ω = r·ω_B exact: F0 = q·ω·ħ/(2π·r).
/// Rejects non-coprime (q, r).
double resonant_static_force(int q, int r, double omega, double hbar);

/// Scaled ħ from the lattice depth ratio V0/E_R: ħ = 4/√(V0/E_R).
double hbar_from_lattice_depth(double depth_ratio);

} // namespace wsdecay
