#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace eloforge::num {

/// Adaptive Simpson quadrature with an absolute tolerance and a recursion cap.
/// The integrand must be finite on [a, b].
template <class F>
double adaptive_simpson(F&& fn, double a, double b, double abs_tol, int max_depth = 60) {
    struct Impl {
        F& f;
        int max_depth;
        double recurse(double a, double fa, double b, double fb, double m, double fm,
                       double whole, double eps, int depth) {
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double h = b - a;
            const double left = h / 12.0 * (fa + 4.0 * flm + fm);
            const double right = h / 12.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth >= max_depth || std::abs(delta) <= 15.0 * eps) {
                return left + right + delta / 15.0;
            }
            return recurse(a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1) +
                   recurse(m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1);
        }
    };
    if (a == b) return 0.0;
    const double fa = fn(a);
    const double fb = fn(b);
    const double m = 0.5 * (a + b);
    const double fm = fn(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Impl impl{fn, max_depth};
    return impl.recurse(a, fa, b, fb, m, fm, whole, abs_tol, 0);
}

/// Maximizes a unimodal function on [lo, hi] by golden-section search.
/// Returns the abscissa of the maximum.
template <class F>
double golden_max(F&& fn, double lo, double hi, double xtol = 1e-12) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > xtol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

/// Solves fn(x) = target for an increasing fn on [lo, hi], by bisection with
/// secant acceleration. Assumes fn(lo) <= target <= fn(hi).
template <class F>
double solve_increasing(F&& fn, double target, double lo, double hi,
                        double ytol, double xtol = 1e-14) {
    double flo = fn(lo) - target;
    double fhi = fn(hi) - target;
    if (flo > 0.0 || fhi < 0.0) {
        throw std::invalid_argument("solve_increasing: target not bracketed");
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        // Secant through the bracket endpoints, falling back to the midpoint
        // when the step leaves the bracket.
        double s = lo - flo * (hi - lo) / (fhi - flo);
        if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
        x = s;
        const double fx = fn(x) - target;
        if (std::abs(fx) <= ytol) return x;
        if (fx < 0.0) { lo = x; flo = fx; } else { hi = x; fhi = fx; }
        if (hi - lo <= xtol * std::max(1.0, std::abs(x))) return 0.5 * (lo + hi);
        // Bisect every other round so a flat secant cannot stall the bracket.
        if (it % 2 == 1) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = fn(mid) - target;
            if (std::abs(fmid) <= ytol) return mid;
            if (fmid < 0.0) { lo = mid; flo = fmid; } else { hi = mid; fhi = fmid; }
        }
    }
    return x;
}

inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace eloforge::num
