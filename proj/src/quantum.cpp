#include "wsdecay/quantum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wsdecay {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

inline void sin_cos(double a, double& s, double& c) {
#if defined(__GNUC__)
    ::sincos(a, &s, &c);
#else
    s = std::sin(a);
    c = std::cos(a);
#endif
}

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

/// In-place transform pair on one buffer; plan creation is not reentrant.
class FftPair {
public:
    FftPair(std::complex<double>* data, std::size_t n) {
        auto* raw = reinterpret_cast<fftw_complex*>(data);
        std::lock_guard<std::mutex> lock(fftw_mutex());
        to_x_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
        to_p_ = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
        if (!to_x_ || !to_p_) throw std::runtime_error("FFTW plan creation failed");
    }
    ~FftPair() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(to_x_);
        fftw_destroy_plan(to_p_);
    }
    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    void to_position() const { fftw_execute(to_x_); }
    void to_momentum() const { fftw_execute(to_p_); }

private:
    fftw_plan to_x_;
    fftw_plan to_p_;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

MomentumGrid MomentumGrid::make(double p_min_request, double p_max, std::size_t n,
                                double hbar, double absorber_fraction) {
    if (!(p_min_request < p_max)) throw std::invalid_argument("MomentumGrid: p_min >= p_max");
    if (!(hbar > 0.0)) throw std::invalid_argument("MomentumGrid: hbar must be positive");
    if (!(absorber_fraction > 0.0 && absorber_fraction < 0.5))
        throw std::invalid_argument("MomentumGrid: absorber fraction out of range");
    MomentumGrid g;
    g.n = n;
    g.hbar = hbar;
    const double dp_request = (p_max - p_min_request) / static_cast<double>(n);
    const double m = std::ceil(hbar / dp_request - 1e-12);
    g.dp = hbar / m;
    g.p_max = p_max;
    g.p_min = p_max - g.dp * static_cast<double>(n);
    g.absorber_top = g.p_min + absorber_fraction * (g.p_max - g.p_min);
    g.validate();
    return g;
}

void MomentumGrid::validate() const {
    if (!is_power_of_two(n) || n < 8)
        throw std::invalid_argument("MomentumGrid: n must be a power of two >= 8");
    if (dp > 0.5 * hbar + 1e-15)
        throw std::invalid_argument("MomentumGrid: dp exceeds hbar/2; enlarge n or shrink span");
    if (!(p_min < absorber_top && absorber_top < p_max))
        throw std::invalid_argument("MomentumGrid: absorber ramp outside grid");
}

double WavepacketState::norm_sq() const {
    double sum = 0.0;
    for (const auto& a : psi) sum += std::norm(a);
    return sum * grid.dp;
}

WavepacketState init_gaussian(double x0, double p0, double sigma_p,
                              const MomentumGrid& grid, const LatticeParams& params) {
    grid.validate();
    if (!(sigma_p > 0.0)) throw std::invalid_argument("init_gaussian: sigma_p must be positive");
    const double lo = p0 - 4.0 * sigma_p;
    const double hi = p0 + 4.0 * sigma_p;
    if (lo <= grid.p_min || hi >= grid.p_max)
        throw std::invalid_argument("init_gaussian: packet does not fit inside the grid");
    if (lo <= grid.absorber_top)
        throw std::invalid_argument("init_gaussian: packet overlaps the absorber region");

    WavepacketState st;
    st.grid = grid;
    st.params = params;
    st.t = params.t0;
    st.absorbed = 0.0;
    // canonical offset of lab content at launch is F0·t0 (G vanishes at t0)
    st.shift_cells = std::llround(params.f0 * params.t0 / grid.dp);
    st.psi.resize(grid.n);

    double norm = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double p = grid.p(j);
        const double envelope = std::exp(-(p - p0) * (p - p0) / (4.0 * sigma_p * sigma_p));
        const double phase = -p * x0 / grid.hbar;
        st.psi[j] = std::polar(envelope, phase);
        norm += envelope * envelope;
    }
    norm = std::sqrt(norm * grid.dp);
    for (auto& a : st.psi) a /= norm;
    return st;
}

void evolve(WavepacketState& state, double duration, double dt, const EvolveOptions& options) {
    const MomentumGrid& g = state.grid;
    const LatticeParams& par = state.params;
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    if (dt > par.t_omega / 512.0 + 1e-15)
        throw std::invalid_argument("evolve: dt must be <= T_omega/512");
    const double ratio = duration / dt;
    const long long n_steps = std::llround(ratio);
    if (n_steps < 0 || std::abs(ratio - static_cast<double>(n_steps)) > 1e-9)
        throw std::invalid_argument("evolve: duration must be a multiple of dt");
    if (n_steps == 0) return;
    if (state.psi.size() != g.n) throw std::invalid_argument("evolve: state/grid size mismatch");

    const std::size_t n = g.n;
    const double hbar = g.hbar;
    const double dp = g.dp;
    const double f0 = options.force_on ? par.f0 : 0.0;
    const double t_entry = state.t;

    // conjugate position grid: x_k = k·dx spans an integer number of lattice
    // periods by grid construction
    const double dx = two_pi * (hbar / dp) / static_cast<double>(n);
    std::vector<double> cos_x(n), sin_x(n);
    for (std::size_t k = 0; k < n; ++k) sin_cos(static_cast<double>(k) * dx, sin_x[k], cos_x[k]);

    std::vector<double> mask;
    if (options.absorber_on) {
        mask.assign(n, 1.0);
        const double ramp = g.absorber_top - g.p_min;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = g.p(j);
            if (p < g.absorber_top) {
                const double c = std::cos(0.5 * std::numbers::pi * (g.absorber_top - p) / ramp);
                mask[j] = c * c;
            }
        }
    }

    FftPair fft(state.psi.data(), n);
    auto* psi = state.psi.data();

    // exact phase integral of the kinetic term over [ta, tb]:
    // ∫(P−F0 t)² dt / 2ħ = Δt·(a² + ab + b²)/6ħ, a = P−F0·ta, b = P−F0·tb
    const auto kinetic = [&](double ta, double tb) {
        const double dtk = tb - ta;
        const double base = g.p_min + static_cast<double>(state.shift_cells) * dp;
        for (std::size_t j = 0; j < n; ++j) {
            const double p_can = base + static_cast<double>(j) * dp;
            const double a = p_can - f0 * ta;
            const double b = p_can - f0 * tb;
            const double theta = dtk * (a * a + a * b + b * b) / (6.0 * hbar);
            double s, c;
            sin_cos(theta, s, c);
            psi[j] *= std::complex<double>(c, -s);
        }
    };

    const auto potential = [&](double t_mid) {
        if (options.v_amplitude == 0.0) return;
        fft.to_position();
        const double k_disp = options.force_on ? displacement_k(t_mid, par) : 0.0;
        double sk, ck;
        sin_cos(k_disp, sk, ck);
        const double strength = options.v_amplitude * dt / hbar;
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double theta = strength * (cos_x[k] * ck + sin_x[k] * sk);
            double s, c;
            sin_cos(theta, s, c);
            psi[k] *= std::complex<double>(c * inv_n, -s * inv_n);
        }
        fft.to_momentum();
    };

    // returns the post-mask norm (Σ|ψ|²·dp) and books removed probability
    const auto apply_mask = [&]() -> double {
        double after = 0.0;
        if (options.absorber_on) {
            double before = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double w = std::norm(psi[j]);
                before += w;
                psi[j] *= mask[j];
                after += w * mask[j] * mask[j];
            }
            state.absorbed += (before - after) * dp;
        } else {
            for (std::size_t j = 0; j < n; ++j) after += std::norm(psi[j]);
        }
        return after * dp;
    };

    // keeps the stored axis on lab momentum: rolls the array by whole cells
    // when the canonical offset F0·t + G_ω(t) has drifted past dp/2
    const auto recenter = [&](double t_now) {
        if (!options.force_on) return;
        const double target = f0 * t_now + driving_impulse(t_now, par);
        const long long m = std::llround(target / dp) - state.shift_cells;
        if (m == 0) return;
        double dropped = 0.0;
        const long long nn = static_cast<long long>(n);
        if (m > 0) {
            for (long long j = 0; j < std::min(m, nn); ++j) dropped += std::norm(psi[j]);
            for (long long j = 0; j < nn; ++j)
                psi[j] = (j + m < nn) ? psi[j + m] : std::complex<double>(0.0, 0.0);
        } else {
            for (long long j = std::max<long long>(0, nn + m); j < nn; ++j)
                dropped += std::norm(psi[j]);
            for (long long j = nn - 1; j >= 0; --j)
                psi[j] = (j + m >= 0) ? psi[j + m] : std::complex<double>(0.0, 0.0);
        }
        state.absorbed += dropped * dp;
        state.shift_cells += m;
    };

    for (long long i = 0; i < n_steps; ++i) {
        const double t_i = t_entry + static_cast<double>(i) * dt;
        kinetic(t_i, t_i + 0.5 * dt);
        potential(t_i + 0.5 * dt);
        kinetic(t_i + 0.5 * dt, t_i + dt);
        const double norm = apply_mask();
        recenter(t_i + dt);
        if (options.absorber_on || (i & 63) == 63 || i + 1 == n_steps) {
            const double closure = norm + state.absorbed - 1.0;
            if (std::abs(closure) > 1e-6)
                throw std::runtime_error(
                    "evolve: probability ledger violated at t = " +
                    std::to_string(t_i + dt) + " (norm + absorbed - 1 = " +
                    std::to_string(closure) + "); grid too small or dt too large");
        }
    }
    state.t = t_entry + static_cast<double>(n_steps) * dt;
}

double survival_probability(const WavepacketState& state, const StripBounds& strip) {
    strip.validate();
    const MomentumGrid& g = state.grid;
    if (strip.p1 < g.absorber_top || strip.p2 > g.p_max)
        throw std::invalid_argument("survival_probability: strip must lie inside the grid, outside the absorber");
    double sum = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double p = g.p(j);
        if (p > strip.p1 && p < strip.p2) sum += std::norm(state.psi[j]);
    }
    return sum * g.dp;
}

namespace {

AmplitudeSamples normalize_intensities(std::vector<double> raw) {
    if (raw.size() < 50)
        throw std::invalid_argument("amplitude_samples: fewer than 50 samples");
    double total = 0.0;
    for (double v : raw) total += v;
    if (!(total > 0.0)) throw std::invalid_argument("amplitude_samples: zero total intensity");
    AmplitudeSamples out;
    out.s.resize(raw.size());
    out.x.resize(raw.size());
    const double mean = total / static_cast<double>(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out.s[i] = raw[i] / total;
        out.x[i] = raw[i] / mean;
    }
    return out;
}

} // namespace

AmplitudeSamples amplitude_samples(const WavepacketState& state, const StripBounds& strip,
                                   int decimation) {
    strip.validate();
    if (decimation < 1) throw std::invalid_argument("amplitude_samples: decimation must be >= 1");
    std::vector<double> raw;
    int count = 0;
    for (std::size_t j = 0; j < state.grid.n; ++j) {
        const double p = state.grid.p(j);
        if (p > strip.p1 && p < strip.p2) {
            if (count % decimation == 0) raw.push_back(std::norm(state.psi[j]));
            ++count;
        }
    }
    return normalize_intensities(std::move(raw));
}

AmplitudeSamples normalized_intensity_samples(std::span<const std::complex<double>> amps) {
    std::vector<double> raw(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) raw[i] = std::norm(amps[i]);
    return normalize_intensities(std::move(raw));
}

std::vector<double> momentum_density(const WavepacketState& state) {
    std::vector<double> out(state.grid.n);
    for (std::size_t j = 0; j < state.grid.n; ++j) out[j] = std::abs(state.psi[j]);
    return out;
}

} // namespace wsdecay
