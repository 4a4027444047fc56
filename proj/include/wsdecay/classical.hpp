#pragma once

#include <cstdint>
#include <vector>

#include "wsdecay/lattice.hpp"
#include "wsdecay/series.hpp"

namespace wsdecay {

/// Classical phase-space point of H = p²/2 + cos x + F(t)·x.
struct PhaseState {
    double x = 0.0;
    double p = 0.0;
    double t = 0.0;
};

/// Tangent map M(t) = ∂(x,p)_t / ∂(x,p)_0. Symplectic, det M = 1.
struct Monodromy {
    // row-major: [dx/dx0, dx/dp0; dp/dx0, dp/dp0]
    double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;

    double det() const { return m00 * m11 - m01 * m10; }
};

/// Largest singular value (closed 2×2 form).
double monodromy_norm(const Monodromy& m);

/// Test hooks: scale the lattice force (0 disables the potential) and
/// switch the external force F(t) off entirely.
struct IntegratorOptions {
    double v_amplitude = 1.0;
    bool force_on = true;
};

/// Advances state (and, when given, the tangent map) by `duration` with a
/// Strang kick-drift-kick splitting; F(t) is sampled at each step midpoint,
/// which keeps the scheme second order and exactly time-reversible.
/// dt must divide duration and satisfy |dt| ≤ T_ω/256; negative dt (with
/// negative duration) integrates backwards.
/// Throws std::runtime_error with the failure time if the state overflows.
void propagate(PhaseState& state, Monodromy* monodromy, double duration,
               const LatticeParams& params, double dt,
               const IntegratorOptions& options = {});

/// Field of log10 ‖M(horizon)‖ over a rectangle of initial conditions
/// launched at t = t0. Values are row-major with p as the outer index.
/// Non-finite trajectories are recorded as NaN, not a failure.
struct MonodromyMap {
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> log10_norm;  // size x.size() * p.size(), p outer

    double at(std::size_t ip, std::size_t ix) const { return log10_norm[ip * x.size() + ix]; }
};

MonodromyMap monodromy_map(double x_min, double x_max, std::size_t nx,
                           double p_min, double p_max, std::size_t np,
                           double horizon, const LatticeParams& params, double dt,
                           unsigned workers = 1);

/// Stroboscopic section for the non-biased case: samples (x mod 2π, p) at
/// t = t0 + k·T_ω, k = 0..n_periods, for each seed. Requires F0 = 0.
std::vector<PhaseState> stroboscopic_section(const std::vector<PhaseState>& initial,
                                             int n_periods, const LatticeParams& params,
                                             double dt);

/// Chaotic-ensemble survival. Members are drawn uniformly over
/// x ∈ [0,2π) × p ∈ (p1,p2); candidates whose 6T_ω monodromy norm stays
/// below the island threshold are rejected as regular. P(t) is the fraction
/// with p(t) ∈ (p1,p2), sampled once per period. Identical seeds give
/// bit-identical series for any worker count.
struct SurvivalOptions {
    double dt_divisor = 2048.0;          // dt = T_ω / dt_divisor
    double island_norm_threshold = 1e2;  // reject ‖M(6T_ω)‖ below this
    unsigned workers = 1;
};

SurvivalSeries classical_survival(std::size_t ensemble_size, int n_periods,
                                  const StripBounds& strip, const LatticeParams& params,
                                  std::uint64_t seed, const SurvivalOptions& options = {});

} // namespace wsdecay
