#include "wsdecay/rmt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wsdecay/quadrature.hpp"

namespace wsdecay {

void EnsembleClass::validate() const {
    if (nu != 1 && nu != 2 && nu != 4)
        throw std::invalid_argument("EnsembleClass: nu must be 1, 2 or 4");
}

RmtSpec RmtSpec::from_heisenberg(int q, double t_heisenberg) {
    RmtSpec s;
    s.q = q;
    s.t_heisenberg = t_heisenberg;
    s.validate();
    return s;
}

RmtSpec RmtSpec::from_spacing(int q, double delta, double hbar) {
    if (!(delta > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("RmtSpec: delta and hbar must be positive");
    RmtSpec s;
    s.q = q;
    s.delta = delta;
    s.hbar = hbar;
    s.t_heisenberg = 2.0 * std::numbers::pi * hbar / delta;
    s.validate();
    return s;
}

void RmtSpec::validate() const {
    if (q < 1) throw std::invalid_argument("RmtSpec: q must be >= 1");
    if (!(t_heisenberg > 0.0))
        throw std::invalid_argument("RmtSpec: t_heisenberg must be positive");
    if (delta && hbar) {
        const double lhs = t_heisenberg * (*delta);
        const double rhs = 2.0 * std::numbers::pi * (*hbar);
        if (std::abs(lhs - rhs) > 1e-12 * rhs)
            throw std::invalid_argument("RmtSpec: T_H * delta != 2*pi*hbar");
    }
}

double chi2_density(double s, const EnsembleClass& ensemble) {
    ensemble.validate();
    if (s < 0.0) throw std::domain_error("chi2_density: s must be >= 0");
    const double nu = ensemble.nu;
    if (ensemble.nu == 1 && s == 0.0)
        throw std::domain_error("chi2_density: W_1 diverges at s = 0");
    const double half = 0.5 * nu;
    return std::pow(half, half) * std::pow(s, half - 1.0) * std::exp(-half * s) /
           std::tgamma(half);
}

double chi2_cdf(double s, const EnsembleClass& ensemble) {
    ensemble.validate();
    if (s <= 0.0) return 0.0;
    switch (ensemble.nu) {
        case 1: return std::erf(std::sqrt(0.5 * s));
        case 2: return -std::expm1(-s);
        default: return 1.0 - std::exp(-2.0 * s) * (1.0 + 2.0 * s);
    }
}

namespace detail {

double gamma_p_int(int a, double x) {
    if (a < 1) throw std::invalid_argument("gamma_p_int: a must be >= 1");
    if (x < 0.0) throw std::domain_error("gamma_p_int: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        // series around 0: P = x^a e^{-x}/a! * sum_m x^m / prod_{j<=m}(a+j)
        double term = 1.0;
        double sum = 1.0;
        for (int m = 1; m < 2000; ++m) {
            term *= x / (a + m);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::exp(a * std::log(x) - x - std::lgamma(a + 1.0)) * sum;
    }
    // complement is a finite sum for integer a, all terms positive
    double term = std::exp(-x);
    double q_sum = term;
    for (int k = 1; k < a; ++k) {
        term *= x / k;
        q_sum += term;
    }
    return 1.0 - q_sum;
}

} // namespace detail

double width_density(double gamma_s, int q) {
    if (q < 1) throw std::invalid_argument("width_density: q must be >= 1");
    if (gamma_s < 0.0) throw std::domain_error("width_density: width must be >= 0");
    if (gamma_s == 0.0) return q == 1 ? 1.0 : 0.0;
    return q * detail::gamma_p_int(q + 1, 2.0 * gamma_s) / (2.0 * gamma_s * gamma_s);
}

double hyp2f1(int a, int b, int c, double z) {
    if (c <= 0) throw std::invalid_argument("hyp2f1: c must be a positive integer");
    if (z < 0.0 || z >= 1.0) throw std::domain_error("hyp2f1: z must be in [0, 1)");
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 10000; ++k) {
        term *= (static_cast<double>(a) + k) * (static_cast<double>(b) + k) /
                ((static_cast<double>(c) + k) * (k + 1.0)) * z;
        sum += term;
        if (std::abs(term) < 1e-15 * std::abs(sum)) return sum;
    }
    throw std::runtime_error("hyp2f1: series did not converge (z = " + std::to_string(z) + ")");
}

namespace detail {

double survival_branch_below(double tau, int q) {
    const double z = tau / (1.0 + tau);
    double binom = 1.0;  // C(q, k), updated incrementally
    double sign_tau_pow = 1.0;  // (-tau)^k
    double f = 0.0;
    for (int k = 0; k <= q; ++k) {
        const double first = (1.0 + tau) / (k + 1.0) * hyp2f1(q, k + 1, k + 2, z);
        const double second = 2.0 * tau / (k + 2.0) * hyp2f1(q, k + 2, k + 3, z);
        f += binom * sign_tau_pow * (first - second);
        binom *= static_cast<double>(q - k) / (k + 1.0);
        sign_tau_pow *= -tau;
    }
    return std::pow(1.0 + tau, -q) * f;
}

double survival_branch_above(double tau, int q) {
    const double y = 1.0 / (1.0 + tau);
    const double f = (1.0 + 1.0 / tau) / (q + 1.0) * hyp2f1(q, 1, q + 2, y) -
                     2.0 / (tau * (q + 1.0) * (q + 2.0)) * hyp2f1(q, 2, q + 3, y);
    return std::pow(1.0 + tau, -q) * f;
}

} // namespace detail

double survival_closed(double t, const RmtSpec& spec) {
    spec.validate();
    if (t < 0.0) throw std::domain_error("survival_closed: t must be >= 0");
    const double tau = t / spec.t_heisenberg;
    if (tau == 0.0) return 1.0;
    // tau = 1 is finite on both branches; the upper one is designated
    return tau < 1.0 ? detail::survival_branch_below(tau, spec.q)
                     : detail::survival_branch_above(tau, spec.q);
}

double survival_quadrature(double t, const RmtSpec& spec) {
    spec.validate();
    if (t < 0.0) throw std::domain_error("survival_quadrature: t must be >= 0");
    const double tau = t / spec.t_heisenberg;
    if (tau == 0.0) return 1.0;
    const int q = spec.q;
    const auto integrand = [tau, q](double u) {
        return (tau + u) / (2.0 * tau) *
               std::pow((1.0 + u) / (1.0 + 2.0 * tau + u), q);
    };
    const double lo = std::max(-1.0, 1.0 - 2.0 * tau);
    const double rough = integrate(integrand, lo, 1.0, 1e-8);
    const double tol = std::max(1e-15, 1e-12 * std::abs(rough));
    return integrate(integrand, lo, 1.0, tol);
}

double survival_asymptote(double t, const RmtSpec& spec) {
    spec.validate();
    const double tau = t / spec.t_heisenberg;
    if (!(tau > 0.0)) throw std::domain_error("survival_asymptote: requires tau > 0");
    return std::pow(tau, -spec.q) / (spec.q + 1.0);
}

} // namespace wsdecay
