#include "wsdecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wsdecay/rmt.hpp"

namespace wsdecay {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("fit: need at least 3 points in the window");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit: degenerate abscissa");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / static_cast<double>(n));
    return f;
}

} // namespace

PowerLawFit fit_power_tail(const SurvivalSeries& series, double t_shift,
                           double window_lo, double window_hi) {
    std::vector<double> lx, ly;
    double t_used_lo = 0.0, t_used_hi = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.t[i];
        if (t < window_lo || t > window_hi) continue;
        const double shifted = t - t_shift;
        if (shifted <= 0.0)
            throw std::invalid_argument("fit_power_tail: window includes t <= t_shift");
        if (!(series.p[i] > 0.0))
            throw std::invalid_argument("fit_power_tail: non-positive P at t = " +
                                        std::to_string(t));
        if (lx.empty()) t_used_lo = shifted;
        t_used_hi = shifted;
        lx.push_back(std::log(shifted));
        ly.push_back(std::log(series.p[i]));
    }
    const LineFit line = least_squares_line(lx, ly);

    PowerLawFit fit;
    fit.exponent = -line.slope;
    fit.t_shift = t_shift;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.residual = line.rms;
    fit.low_confidence = t_used_hi < 10.0 * t_used_lo;
    // intercept of ln P = −q ln(t') + q ln T_H − ln(q+1)
    const int q = std::max(1, static_cast<int>(std::llround(fit.exponent)));
    fit.t_heisenberg = std::exp((line.intercept + std::log(q + 1.0)) / q);
    return fit;
}

PowerLawFit fit_power_tail_auto(const SurvivalSeries& series, double t_shift) {
    if (series.size() < 5) throw std::invalid_argument("fit_power_tail_auto: series too short");
    const double t_hi = series.t.back();
    const double decade_lo = t_shift + (t_hi - t_shift) / 10.0;
    PowerLawFit first = fit_power_tail(series, t_shift, decade_lo, t_hi);
    const double refined_lo = t_shift + 2.0 * first.t_heisenberg;
    if (refined_lo <= decade_lo) return first;
    // keep enough of the tail to fit; otherwise stay with the decade window
    std::size_t remaining = 0;
    for (double t : series.t)
        if (t >= refined_lo && t <= t_hi) ++remaining;
    if (remaining < 5 || refined_lo > 0.8 * t_hi) return first;
    return fit_power_tail(series, t_shift, refined_lo, t_hi);
}

ExponentialFit fit_exponential(const SurvivalSeries& series, double window_lo,
                               double window_hi) {
    std::vector<double> tx, ly;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double t = series.t[i];
        if (t < window_lo || t > window_hi) continue;
        if (!(series.p[i] > 0.0))
            throw std::invalid_argument("fit_exponential: non-positive P at t = " +
                                        std::to_string(t));
        tx.push_back(t);
        ly.push_back(std::log(series.p[i]));
    }
    const LineFit line = least_squares_line(tx, ly);
    ExponentialFit fit;
    fit.rate = -line.slope;
    fit.window_lo = window_lo;
    fit.window_hi = window_hi;
    fit.residual = line.rms;
    return fit;
}

DistributionComparison compare_distributions(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 50) throw std::invalid_argument("compare_distributions: need at least 50 samples");
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(n);
    if (!(mean > 0.0)) throw std::invalid_argument("compare_distributions: non-positive mean");

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = samples[i] / mean;
    std::sort(x.begin(), x.end());
    if (x.front() == x.back())
        throw std::invalid_argument("compare_distributions: degenerate samples");

    DistributionComparison out;
    const std::array<int, 3> nus{1, 2, 4};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nus.size(); ++k) {
        const EnsembleClass ens{nus[k]};
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double cdf = chi2_cdf(x[i], ens);
            const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
            const double lo = static_cast<double>(i) / static_cast<double>(n);
            d = std::max({d, std::abs(cdf - hi), std::abs(cdf - lo)});
        }
        out.ks_distance[k] = d;
        if (d < best) {
            best = d;
            out.best_nu = nus[k];
        }
    }

    constexpr int n_bins = 40;
    constexpr double lo_edge = -3.0, hi_edge = 1.0;
    constexpr double bin_w = (hi_edge - lo_edge) / n_bins;
    out.histogram_log10_x.resize(n_bins);
    out.histogram_density.assign(n_bins, 0.0);
    for (int b = 0; b < n_bins; ++b)
        out.histogram_log10_x[b] = lo_edge + (b + 0.5) * bin_w;
    for (double v : x) {
        if (v <= 0.0) continue;
        const double lg = std::log10(v);
        const int b = static_cast<int>(std::floor((lg - lo_edge) / bin_w));
        if (b >= 0 && b < n_bins) out.histogram_density[b] += 1.0;
    }
    for (double& d : out.histogram_density) d /= static_cast<double>(n) * bin_w;
    return out;
}

double peak_profile_model(double omega, double a, double b, double delta_omega,
                          double center) {
    const double d = omega - center;
    return a / std::sqrt(d * d + 3.0 * delta_omega * delta_omega) + b;
}

double PeakFit::peak_value() const {
    return a / (std::sqrt(3.0) * std::abs(delta_omega)) + b;
}

PeakFit fit_peak_profile(std::span<const double> omega, std::span<const double> p,
                         double omega_b) {
    const std::size_t n = omega.size();
    if (n != p.size()) throw std::invalid_argument("fit_peak_profile: size mismatch");
    if (n < 10) throw std::invalid_argument("fit_peak_profile: need at least 10 points");
    const auto [w_min, w_max] = std::minmax_element(omega.begin(), omega.end());
    if (!(*w_min < omega_b && omega_b < *w_max))
        throw std::invalid_argument("fit_peak_profile: scan must bracket omega_b");

    // initial guesses: far-wing average for b, scan maximum for a, half-max
    // width for Δω (model half-max sits at |ω−ω_B| = 3Δω)
    double span = *w_max - *w_min;
    double b0 = 0.0;
    int wing_count = 0;
    double p_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(omega[i] - omega_b) > 0.4 * span) {
            b0 += p[i];
            ++wing_count;
        }
        p_max = std::max(p_max, p[i]);
    }
    b0 = wing_count > 0 ? b0 / wing_count : 0.0;
    if (!(p_max > b0)) b0 = 0.0;
    double half_width = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (p[i] - b0 > 0.5 * (p_max - b0))
            half_width = std::max(half_width, std::abs(omega[i] - omega_b));
    if (half_width == 0.0) half_width = 0.05 * span;
    double dw = half_width / 3.0;
    double a = (p_max - b0) * std::sqrt(3.0) * dw;
    double b = b0;

    const auto cost = [&](double aa, double bb, double ww) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = peak_profile_model(omega[i], aa, bb, ww, omega_b) - p[i];
            ss += r * r;
        }
        return ss;
    };

    PeakFit fit;
    fit.center = omega_b;
    double lambda = 1e-3;
    double current = cost(a, b, dw);
    bool converged = false;
    int iter = 0;
    for (; iter < 500 && !converged; ++iter) {
        // accumulate J^T J and J^T r for the three parameters
        double jtj[3][3] = {{0}};
        double jtr[3] = {0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const double d = omega[i] - omega_b;
            const double denom2 = d * d + 3.0 * dw * dw;
            const double denom = std::sqrt(denom2);
            const double r = a / denom + b - p[i];
            const double ja = 1.0 / denom;
            const double jb = 1.0;
            const double jw = -3.0 * a * dw / (denom2 * denom);
            const double j[3] = {ja, jb, jw};
            for (int u = 0; u < 3; ++u) {
                for (int v = 0; v < 3; ++v) jtj[u][v] += j[u] * j[v];
                jtr[u] += j[u] * r;
            }
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 24 && !accepted; ++attempt) {
            double m[3][3];
            for (int u = 0; u < 3; ++u)
                for (int v = 0; v < 3; ++v)
                    m[u][v] = jtj[u][v] + (u == v ? lambda * jtj[u][u] : 0.0);
            // 3x3 solve by Cramer's rule
            const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            if (det == 0.0 || !std::isfinite(det)) {
                lambda *= 4.0;
                continue;
            }
            const double rhs[3] = {-jtr[0], -jtr[1], -jtr[2]};
            double delta[3];
            for (int col = 0; col < 3; ++col) {
                double mm[3][3];
                for (int u = 0; u < 3; ++u)
                    for (int v = 0; v < 3; ++v) mm[u][v] = (v == col) ? rhs[u] : m[u][v];
                delta[col] = (mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1]) -
                              mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0]) +
                              mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0])) /
                             det;
            }
            const double a_new = a + delta[0];
            const double b_new = b + delta[1];
            const double dw_new = dw + delta[2];
            const double c_new = cost(a_new, b_new, dw_new);
            if (std::isfinite(c_new) && c_new <= current) {
                const double rel = std::max({std::abs(delta[0]) / std::max(1e-300, std::abs(a_new)),
                                             std::abs(delta[1]) / std::max(1e-300, std::abs(b_new) + 1e-30),
                                             std::abs(delta[2]) / std::max(1e-300, std::abs(dw_new))});
                a = a_new;
                b = b_new;
                dw = dw_new;
                current = c_new;
                lambda = std::max(1e-12, lambda / 3.0);
                accepted = true;
                if (rel < 1e-10) converged = true;
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) break;  // step stalled; report best-so-far
    }

    fit.a = a;
    fit.b = b;
    fit.delta_omega = std::abs(dw);
    fit.converged = converged;
    fit.iterations = iter;
    fit.residual = std::sqrt(current / static_cast<double>(n));
    return fit;
}

WidthScalingFit fit_width_scaling(std::span<const double> t,
                                  std::span<const double> delta_omega) {
    if (t.size() != delta_omega.size())
        throw std::invalid_argument("fit_width_scaling: size mismatch");
    if (t.size() < 4) throw std::invalid_argument("fit_width_scaling: need at least 4 points");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || !(delta_omega[i] > 0.0))
            throw std::invalid_argument("fit_width_scaling: times and widths must be positive");
        lx.push_back(std::log(t[i]));
        ly.push_back(std::log(delta_omega[i]));
    }
    const LineFit line = least_squares_line(lx, ly);
    WidthScalingFit fit;
    fit.gamma = -line.slope;
    fit.prefactor = std::exp(line.intercept);
    fit.residual = line.rms;
    return fit;
}

} // namespace wsdecay
