#include "wsdecay/lattice.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wsdecay {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double solve_t0(double omega) {
    if (omega <= 0.0) throw std::invalid_argument("solve_t0: omega must be positive");
    // 2 sin θ = cos 2θ = 1 − 2 sin²θ  ⇒  sin θ = (√3 − 1)/2, smallest positive branch
    const double s = 0.5 * (std::sqrt(3.0) - 1.0);
    return std::asin(s) / omega;
}

LatticeParams LatticeParams::make(double hbar, double omega, double epsilon,
                                  int q, int r, std::optional<double> f0_override) {
    LatticeParams p;
    p.hbar = hbar;
    p.omega = omega;
    p.epsilon = epsilon;
    p.a_omega = epsilon * omega * omega;
    p.q = q;
    p.r = r;
    p.t0 = solve_t0(omega);
    p.t_omega = two_pi / omega;
    p.d = two_pi;
    p.f0 = f0_override ? *f0_override : resonant_static_force(q, r, omega, hbar);
    p.validate();
    return p;
}

void LatticeParams::validate() const {
    if (hbar <= 0.0) throw std::invalid_argument("LatticeParams: hbar must be positive");
    if (omega <= 0.0) throw std::invalid_argument("LatticeParams: omega must be positive");
    if (q < 1 || r < 1) throw std::invalid_argument("LatticeParams: q and r must be >= 1");
    if (std::abs(a_omega - epsilon * omega * omega) > 1e-12 * std::max(1.0, std::abs(a_omega)))
        throw std::invalid_argument("LatticeParams: a_omega != epsilon*omega^2");
    if (std::abs(t_omega * omega - two_pi) > 1e-12)
        throw std::invalid_argument("LatticeParams: t_omega*omega != 2*pi");
    const double res = std::abs(2.0 * std::sin(omega * t0) - std::cos(2.0 * omega * t0));
    if (res > 1e-12)
        throw std::invalid_argument("LatticeParams: t0 residual " + std::to_string(res));
}

ResonanceSpec ResonanceSpec::rational(int q, int r, double omega, double hbar) {
    ResonanceSpec s;
    s.kind = Kind::rational;
    s.q = q;
    s.r = r;
    s.ratio = static_cast<double>(r) / static_cast<double>(q);
    s.omega_b = bloch_frequency(resonant_static_force(q, r, omega, hbar), hbar);
    s.validate(omega);
    return s;
}

ResonanceSpec ResonanceSpec::irrational(double ratio, double omega) {
    if (!(ratio > 0.0)) throw std::invalid_argument("ResonanceSpec: ratio must be positive");
    ResonanceSpec s;
    s.kind = Kind::irrational;
    s.ratio = ratio;
    s.omega_b = omega / ratio;
    return s;
}

void ResonanceSpec::validate(double omega) const {
    if (kind == Kind::rational) {
        const double lhs = q * omega;
        const double rhs = r * omega_b;
        if (std::abs(lhs - rhs) > 1e-12 * std::abs(lhs))
            throw std::invalid_argument("ResonanceSpec: q*omega != r*omega_B");
    }
}

double driving_force(double t, const LatticeParams& params) {
    const double wt = params.omega * t;
    return params.a_omega * (std::cos(wt) + std::sin(2.0 * wt));
}

double driving_impulse(double t, const LatticeParams& params) {
    const double w = params.omega;
    const double wt = w * t;
    const double wt0 = w * params.t0;
    return params.a_omega *
           ((std::sin(wt) - std::sin(wt0)) / w -
            (std::cos(2.0 * wt) - std::cos(2.0 * wt0)) / (2.0 * w));
}

double displacement_k(double t, const LatticeParams& params) {
    const double wt = params.omega * t;
    const double wt0 = params.omega * params.t0;
    return -(params.epsilon / 4.0) *
           (4.0 * std::cos(wt) + std::sin(2.0 * wt) -
            4.0 * std::cos(wt0) - std::sin(2.0 * wt0));
}

double bloch_frequency(double f0, double hbar) {
    return two_pi * f0 / hbar;
}

double resonant_static_force(int q, int r, double omega, double hbar) {
    if (q < 1 || r < 1)
        throw std::invalid_argument("resonant_static_force: q and r must be >= 1");
    if (std::gcd(q, r) != 1)
        throw std::invalid_argument("resonant_static_force: q=" + std::to_string(q) +
                                    ", r=" + std::to_string(r) + " are not coprime");
    if (omega <= 0.0 || hbar <= 0.0)
        throw std::invalid_argument("resonant_static_force: omega and hbar must be positive");
    return q * omega * hbar / (r * two_pi);
}

double hbar_from_lattice_depth(double depth_ratio) {
    if (!(depth_ratio > 0.0))
        throw std::invalid_argument("hbar_from_lattice_depth: depth ratio must be positive");
    return 4.0 / std::sqrt(depth_ratio);
}

} // namespace wsdecay
