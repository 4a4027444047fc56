#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "wsdecay/lattice.hpp"
#include "wsdecay/series.hpp"

namespace wsdecay {

/// Uniform momentum grid carrying the wavepacket. The spacing is snapped to
/// dp = ħ/M (integer M): the conjugate position box 2πħ/dp then spans an
/// integer number of lattice periods, so cos(x) is smooth across the wrap
/// and integer-cell momentum translations are exact on the grid.
struct MomentumGrid {
    double p_min = 0.0;
    double p_max = 0.0;
    std::size_t n = 0;
    double dp = 0.0;
    double hbar = 0.0;
    double absorber_top = 0.0;  // cos²-ramp spans [p_min, absorber_top]

    /// p_max and n are kept as requested; p_min moves to p_max − n·dp after
    /// snapping dp to the largest ħ/M not exceeding the requested spacing.
    static MomentumGrid make(double p_min_request, double p_max, std::size_t n,
                             double hbar, double absorber_fraction = 0.15);

    double p(std::size_t j) const { return p_min + dp * static_cast<double>(j); }
    void validate() const;
};

/// Complex amplitudes ψ(p_j) on the grid's lab-momentum axis, plus the
/// probability ledger: Σ|ψ|²·dp + absorbed = 1 at all times.
///
/// The split step evolves the Kramers-Henneberger Hamiltonian
/// (p − F0·t)²/2 + cos(x − K_ω(t)), whose canonical momentum of lab-frame
/// content grows as F0·t + G_ω(t). shift_cells re-centers the array by whole
/// cells so the stored axis stays on lab momentum; the canonical momentum of
/// cell j is grid.p(j) + shift_cells·dp.
struct WavepacketState {
    std::vector<std::complex<double>> psi;
    MomentumGrid grid;
    LatticeParams params;
    double t = 0.0;
    double absorbed = 0.0;
    long long shift_cells = 0;

    double norm_sq() const;  // Σ|ψ|²·dp
};

/// Minimum-uncertainty packet ψ(p) ∝ exp(−(p−p0)²/(4σ_p²)) e^{−i p x0/ħ},
/// normalized to Σ|ψ|²dp = 1, launched at t = t0. Packets overlapping the
/// absorber (p0 − 4σ_p below the ramp top) are rejected.
WavepacketState init_gaussian(double x0, double p0, double sigma_p,
                              const MomentumGrid& grid, const LatticeParams& params);

/// Test hooks: scale or disable the lattice potential, switch the external
/// force (static and ac) off, disable the absorbing mask.
struct EvolveOptions {
    double v_amplitude = 1.0;
    bool force_on = true;
    bool absorber_on = true;
};

/// Strang split step: half kinetic phase exp(−i(p−F0t)²dt/4ħ) in momentum
/// representation (time integral taken exactly), Fourier transform, potential
/// phase exp(−i cos(x−K_ω(t_mid))dt/ħ), transform back, half kinetic phase,
/// absorber mask, re-centering roll. duration must be a multiple of dt and
/// dt ≤ T_ω/512. Aborts when |norm + absorbed − 1| exceeds 1e−6.
void evolve(WavepacketState& state, double duration, double dt,
            const EvolveOptions& options = {});

/// Σ_{p1 < p_j < p2} |ψ(p_j)|² dp (midpoint rule).
double survival_probability(const WavepacketState& state, const StripBounds& strip);

/// Normalized strip intensities s_n (Σ s_n = 1) and their unit-mean rescaling
/// x_n = s_n / s̄, ready for histogramming as W(log x).
struct AmplitudeSamples {
    std::vector<double> s;
    std::vector<double> x;
};

/// Takes every decimation-th grid point inside the strip; fewer than 50
/// samples is an error.
AmplitudeSamples amplitude_samples(const WavepacketState& state, const StripBounds& strip,
                                   int decimation = 1);

/// The same normalization applied to a raw amplitude set (used by the
/// statistics tests on synthetic draws).
AmplitudeSamples normalized_intensity_samples(std::span<const std::complex<double>> amps);

/// |ψ(p_j)| for snapshot emission.
std::vector<double> momentum_density(const WavepacketState& state);

} // namespace wsdecay
