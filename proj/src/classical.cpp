#include "wsdecay/classical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wsdecay/parallel.hpp"
#include "wsdecay/rng.hpp"

namespace wsdecay {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

long long checked_step_count(double duration, double dt, double t_omega) {
    if (dt == 0.0) throw std::invalid_argument("propagate: dt must be nonzero");
    if (std::abs(dt) > t_omega / 256.0 + 1e-15)
        throw std::invalid_argument("propagate: |dt| must be <= T_omega/256");
    const double ratio = duration / dt;
    const long long n = std::llround(ratio);
    if (n < 0 || std::abs(ratio - static_cast<double>(n)) > 1e-9)
        throw std::invalid_argument("propagate: dt must divide duration");
    return n;
}

} // namespace

double monodromy_norm(const Monodromy& m) {
    // singular values of a 2x2: sigma_max^2 = (T + sqrt(T^2 - 4 D^2))/2
    // with T the squared Frobenius norm and D the determinant
    const double frob2 = m.m00 * m.m00 + m.m01 * m.m01 + m.m10 * m.m10 + m.m11 * m.m11;
    const double det = m.det();
    const double disc = std::max(frob2 * frob2 - 4.0 * det * det, 0.0);
    return std::sqrt(0.5 * (frob2 + std::sqrt(disc)));
}

void propagate(PhaseState& state, Monodromy* monodromy, double duration,
               const LatticeParams& params, double dt, const IntegratorOptions& options) {
    const long long n_steps = checked_step_count(duration, dt, params.t_omega);
    const double t_start = state.t;
    double x = state.x;
    double p = state.p;
    Monodromy m = monodromy ? *monodromy : Monodromy{};
    const double va = options.v_amplitude;

    for (long long i = 0; i < n_steps; ++i) {
        const double t_mid = t_start + (static_cast<double>(i) + 0.5) * dt;
        const double f_ext = options.force_on ? params.f0 + driving_force(t_mid, params) : 0.0;
        const double half = 0.5 * dt;

        // kick, drift, kick; tangent map advances through the same shears
        p += (va * std::sin(x) - f_ext) * half;
        if (monodromy) {
            const double c = va * std::cos(x) * half;
            m.m10 += c * m.m00;
            m.m11 += c * m.m01;
        }
        x += p * dt;
        if (monodromy) {
            m.m00 += dt * m.m10;
            m.m01 += dt * m.m11;
        }
        p += (va * std::sin(x) - f_ext) * half;
        if (monodromy) {
            const double c = va * std::cos(x) * half;
            m.m10 += c * m.m00;
            m.m11 += c * m.m01;
        }

        if (!std::isfinite(x) || !std::isfinite(p))
            throw std::runtime_error("propagate: non-finite state at t = " +
                                     std::to_string(t_start + (i + 1) * dt));
    }

    state.x = x;
    state.p = p;
    state.t = t_start + static_cast<double>(n_steps) * dt;
    if (monodromy) *monodromy = m;
}

MonodromyMap monodromy_map(double x_min, double x_max, std::size_t nx,
                           double p_min, double p_max, std::size_t np,
                           double horizon, const LatticeParams& params, double dt,
                           unsigned workers) {
    if (nx == 0 || np == 0) throw std::invalid_argument("monodromy_map: empty grid");
    MonodromyMap map;
    map.x.resize(nx);
    map.p.resize(np);
    for (std::size_t i = 0; i < nx; ++i)
        map.x[i] = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(nx);
    for (std::size_t j = 0; j < np; ++j)
        map.p[j] = np == 1 ? p_min
                           : p_min + (p_max - p_min) * static_cast<double>(j) /
                                         static_cast<double>(np - 1);
    map.log10_norm.assign(nx * np, 0.0);

    parallel_for(np, workers, [&](std::size_t j) {
        for (std::size_t i = 0; i < nx; ++i) {
            PhaseState s{map.x[i], map.p[j], params.t0};
            Monodromy m;
            double value;
            try {
                propagate(s, &m, horizon, params, dt);
                value = std::log10(monodromy_norm(m));
            } catch (const std::runtime_error&) {
                value = std::numeric_limits<double>::quiet_NaN();
            }
            map.log10_norm[j * nx + i] = value;
        }
    });
    return map;
}

std::vector<PhaseState> stroboscopic_section(const std::vector<PhaseState>& initial,
                                             int n_periods, const LatticeParams& params,
                                             double dt) {
    if (params.f0 != 0.0)
        throw std::invalid_argument("stroboscopic_section: requires F0 = 0");
    if (n_periods < 0)
        throw std::invalid_argument("stroboscopic_section: n_periods must be >= 0");

    std::vector<PhaseState> points;
    points.reserve(initial.size() * static_cast<std::size_t>(n_periods + 1));
    for (const auto& seed : initial) {
        PhaseState s{seed.x, seed.p, params.t0};
        for (int k = 0; k <= n_periods; ++k) {
            if (k > 0) propagate(s, nullptr, params.t_omega, params, dt);
            double folded = std::fmod(s.x, two_pi);
            if (folded < 0.0) folded += two_pi;
            points.push_back(PhaseState{folded, s.p, s.t});
        }
    }
    return points;
}

SurvivalSeries classical_survival(std::size_t ensemble_size, int n_periods,
                                  const StripBounds& strip, const LatticeParams& params,
                                  std::uint64_t seed, const SurvivalOptions& options) {
    if (ensemble_size < 100)
        throw std::invalid_argument("classical_survival: ensemble_size must be >= 100");
    strip.validate();
    if (n_periods < 0)
        throw std::invalid_argument("classical_survival: n_periods must be >= 0");

    const double dt = params.t_omega / options.dt_divisor;

    // Draw candidates sequentially (seed fixes the sequence), test the
    // island-rejection criterion in parallel batches, accept in draw order.
    SplitMix64 rng(seed);
    std::vector<PhaseState> members;
    members.reserve(ensemble_size);
    while (members.size() < ensemble_size) {
        const std::size_t batch = std::max<std::size_t>(64, ensemble_size - members.size());
        std::vector<PhaseState> candidates(batch);
        for (auto& c : candidates)
            c = PhaseState{rng.uniform(0.0, two_pi), rng.uniform(strip.p1, strip.p2), params.t0};
        std::vector<char> chaotic(batch, 0);
        parallel_for(batch, options.workers, [&](std::size_t i) {
            PhaseState s = candidates[i];
            Monodromy m;
            try {
                propagate(s, &m, 6.0 * params.t_omega, params, dt);
                chaotic[i] = monodromy_norm(m) >= options.island_norm_threshold;
            } catch (const std::runtime_error&) {
                chaotic[i] = 1;  // escaped to overflow: certainly not an island
            }
        });
        for (std::size_t i = 0; i < batch && members.size() < ensemble_size; ++i)
            if (chaotic[i]) members.push_back(candidates[i]);
    }

    // Escape bookkeeping is a pure momentum-window test at period boundaries.
    std::vector<std::size_t> inside_counts(static_cast<std::size_t>(n_periods) + 1, 0);
    std::mutex merge_mutex;
    const unsigned workers = std::max(1u, options.workers);
    const std::size_t chunk = (ensemble_size + workers - 1) / workers;
    parallel_for(workers, workers, [&](std::size_t w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(ensemble_size, lo + chunk);
        std::vector<std::size_t> local(inside_counts.size(), 0);
        for (std::size_t i = lo; i < hi; ++i) {
            PhaseState s = members[i];
            for (int k = 0; k <= n_periods; ++k) {
                if (k > 0) propagate(s, nullptr, params.t_omega, params, dt);
                if (s.p > strip.p1 && s.p < strip.p2) ++local[static_cast<std::size_t>(k)];
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t k = 0; k < local.size(); ++k) inside_counts[k] += local[k];
    });

    SurvivalSeries series;
    series.source = SeriesSource::classical;
    series.t.resize(inside_counts.size());
    series.p.resize(inside_counts.size());
    for (std::size_t k = 0; k < inside_counts.size(); ++k) {
        series.t[k] = static_cast<double>(k) * params.t_omega;
        series.p[k] = static_cast<double>(inside_counts[k]) / static_cast<double>(ensemble_size);
    }
    return series;
}

} // namespace wsdecay
