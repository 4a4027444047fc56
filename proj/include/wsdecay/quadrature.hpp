#pragma once

#include <cmath>
#include <stdexcept>

namespace wsdecay {

/// Adaptive Simpson integration of a smooth integrand on [a, b].
/// Absolute tolerance; recursion depth bounded to keep pathological
/// integrands from hanging.
template <typename F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 48) {
    struct Impl {
        const F& f;
        int max_depth;
        double simpson(double a, double fa, double b, double fb, double fm) const {
            return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }
        double recurse(double a, double fa, double b, double fb, double fm,
                       double whole, double tol, int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = simpson(a, fa, m, fm, flm);
            const double right = simpson(m, fm, b, fb, frm);
            const double delta = left + right - whole;
            if (depth >= max_depth || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return recurse(a, fa, m, fm, flm, left, 0.5 * tol, depth + 1) +
                   recurse(m, fm, b, fb, frm, right, 0.5 * tol, depth + 1);
        }
    };
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    Impl impl{f, max_depth};
    const double whole = impl.simpson(a, fa, b, fb, fm);
    return impl.recurse(a, fa, b, fb, fm, whole, abs_tol, 0);
}

} // namespace wsdecay
