#include "eloforge/tails.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "eloforge/numeric.hpp"

namespace eloforge {

namespace {
// Past this point 1/sigma(-x) is within a factor e^9 of DBL_MAX.
constexpr double kLogCap = 700.0;
}

double TailFunctions::default_quad_tol() {
    if (const char* env = std::getenv("ELOFORGE_QUAD_TOL")) {
        const double v = std::atof(env);
        if (v > 0.0) return v;
    }
    return 1e-10;
}

TailFunctions::TailFunctions(PotFunction sigma, double quad_tol)
    : sigma_(std::move(sigma)), quad_tol_(quad_tol) {
    if (!(quad_tol_ > 0.0)) throw std::invalid_argument("quad_tol must be positive");
    // Find where -ln sigma(-x) crosses 700; monotone in x.
    if (-sigma_.log_eval(-1.0) > kLogCap) {
        x_cap_ = 1.0;
    } else {
        double hi = 1.0;
        while (hi < 1e300 && -sigma_.log_eval(-hi) <= kLogCap) hi *= 2.0;
        if (hi >= 1e300) {
            x_cap_ = 1e300; // polynomial tails never overflow in practice
        } else {
            x_cap_ = num::solve_increasing(
                [&](double x) { return -sigma_.log_eval(-x); }, kLogCap, hi / 2.0, hi, 1e-9);
        }
    }
}

double TailFunctions::integrand(double tau) const {
    return std::exp(-sigma_.log_eval(-tau));
}

double TailFunctions::check_arg(double x, const char* who) const {
    if (!std::isfinite(x) || x < 0.0) {
        throw std::domain_error(std::string(who) + ": argument must be finite and >= 0");
    }
    if (x > x_cap_) {
        throw std::domain_error(std::string(who) + ": argument " + std::to_string(x) +
                                " exceeds the overflow cap " + std::to_string(x_cap_));
    }
    return x;
}

double TailFunctions::f(double x) const {
    check_arg(x, "eval_f");
    if (x == 0.0) return 0.0;
    // Coarse pass to size the absolute tolerance, then the adaptive pass.
    const auto w = [this](double t) { return integrand(t); };
    double coarse = 0.0;
    {
        const int m = 64;
        const double h = x / m;
        double acc = 0.5 * (w(0.0) + w(x));
        for (int i = 1; i < m; ++i) acc += w(i * h);
        coarse = acc * h;
    }
    const double eps = quad_tol_ * std::max(1.0, std::abs(coarse));
    return num::adaptive_simpson(w, 0.0, x, eps);
}

double TailFunctions::g(double x) const {
    check_arg(x, "eval_g");
    if (x == 0.0) return 0.0;
    return x * integrand(x) - f(x);
}

double TailFunctions::g_direct(double x) const {
    check_arg(x, "eval_g_direct");
    if (x == 0.0) return 0.0;
    // f''(tau) by central differences of the integrand, step scaled to tau.
    const auto fpp = [this](double tau) {
        const double h = std::max(1e-5, 1e-5 * std::abs(tau));
        return (integrand(tau + h) - integrand(tau - h)) / (2.0 * h);
    };
    const auto w = [&](double tau) { return tau * fpp(tau); };
    double coarse = 0.0;
    {
        const int m = 64;
        const double h = x / m;
        double acc = 0.5 * (w(0.0) + w(x));
        for (int i = 1; i < m; ++i) acc += w(i * h);
        coarse = acc * h;
    }
    const double eps = quad_tol_ * std::max(1.0, std::abs(coarse));
    return num::adaptive_simpson(w, 0.0, x, eps);
}

double TailFunctions::f_inv(double y) const {
    if (!std::isfinite(y) || y < 0.0) throw std::domain_error("invert_f: y must be finite and >= 0");
    if (y == 0.0) return 0.0;
    double hi = 1.0;
    while (hi < x_cap_ && f(std::min(hi, x_cap_)) < y) hi *= 2.0;
    hi = std::min(hi, x_cap_);
    if (f(hi) < y) throw std::domain_error("invert_f: y exceeds f at the overflow cap");
    return num::solve_increasing([this](double x) { return f(x); }, y, 0.0, hi,
                                 quad_tol_ * std::max(1.0, y));
}

double TailFunctions::g_inv(double y) const {
    if (!std::isfinite(y) || y < 0.0) throw std::domain_error("invert_g: y must be finite and >= 0");
    if (y == 0.0) return 0.0;
    double hi = 1.0;
    while (hi < x_cap_ && g(std::min(hi, x_cap_)) < y) hi *= 2.0;
    hi = std::min(hi, x_cap_);
    if (g(hi) < y) throw std::domain_error("invert_g: y exceeds g at the overflow cap");
    return num::solve_increasing([this](double x) { return g(x); }, y, 0.0, hi,
                                 quad_tol_ * std::max(1.0, y));
}

}  // namespace eloforge
