#pragma once

#include "eloforge/potfn.hpp"

namespace eloforge {

/// The tail integrals of a pot function:
///   f(x) = int_0^x d tau / sigma(-tau)
///   g(x) = int_0^x tau f''(tau) d tau = x / sigma(-x) - f(x)
/// plus their monotone inverses. f governs the two-player growth rate, g the
/// unlimited-player rating cap.
///
/// Immutable after construction; all members are safe to call concurrently.
class TailFunctions {
  public:
    explicit TailFunctions(PotFunction sigma, double quad_tol = default_quad_tol());

    /// Quadrature of 1/sigma(-tau) over [0, x]. Error <= quad_tol relative to
    /// max(1, |f(x)|). Rejects x < 0, non-finite x, and x beyond the overflow
    /// cap (where 1/sigma(-x) would exceed e^700).
    double f(double x) const;
    /// x/sigma(-x) - f(x), the integration-by-parts form of g.
    double g(double x) const;
    /// Direct quadrature of tau f''(tau) with finite-difference f''; the
    /// cross-check path for g.
    double g_direct(double x) const;

    double f_inv(double y) const;
    double g_inv(double y) const;

    /// Largest admissible argument: -ln sigma(-x) <= 700 there.
    double x_cap() const { return x_cap_; }
    double quad_tol() const { return quad_tol_; }
    const PotFunction& pot() const { return sigma_; }

    /// 1e-10 unless overridden by the ELOFORGE_QUAD_TOL environment variable.
    static double default_quad_tol();

  private:
    double integrand(double tau) const;
    double check_arg(double x, const char* who) const;

    PotFunction sigma_;
    double quad_tol_;
    double x_cap_;
};

}  // namespace eloforge
