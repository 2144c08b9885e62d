#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eloforge {

enum class PotKind { Logistic, Algebraic, GaussianErf, Custom };

/// A pot function sigma: R -> (0,1). sigma(r_A - r_B) is the amount player A
/// stakes when playing B; equivalently A's estimated win probability.
///
/// Values are immutable after construction and cheap to copy; the derived
/// constants below are computed once when the function is built.
class PotFunction {
  public:
    double operator()(double z) const { return eval(z); }
    double eval(double z) const;

    /// ln(sigma(z)), accurate deep into the left tail where eval underflows.
    double log_eval(double z) const;

    PotKind kind() const { return kind_; }
    double algebraic_p() const { return p_; }
    const std::string& name() const { return name_; }

    /// Sampled supremum of sigma(-z)/sigma(-z - 2 sigma(-z)) over z >= 0.
    double sup4() const { return sup4_; }
    double sup4_argmax() const { return sup4_argmax_; }
    /// sup4 with a 1% safety margin, certifying an upper bound on the true
    /// supremum between grid points.
    double sup4_certified() const { return sup4_ * 1.01; }

    /// The gap threshold A = argmax_{z>=0} sigma(-z) z^2 used by the ladder
    /// schedule; absent when sigma(-z) z^2 does not decay.
    std::optional<double> threshold_A() const { return A_; }
    /// (sigma(-A) A^2)^{1/3}; absent whenever A is.
    std::optional<double> c1() const { return c1_; }

    /// 6 + 4*sup4 + 1/sigma(-1): bounds the potential increase per unit pot
    /// along non-upset edges.
    double potential_growth_constant() const { return C2_; }

    static PotFunction logistic();
    static PotFunction algebraic(double p);
    static PotFunction gaussian_erf();
    /// Builds a table-backed pot function without validating it. Rows must
    /// have strictly increasing z. Interpolation is piecewise linear with
    /// exponential tail extensions beyond the table.
    static PotFunction custom_from_table(std::vector<double> z, std::vector<double> s,
                                         std::string name = "custom");

  private:
    PotFunction() = default;
    void compute_cached_constants();

    struct Table;
    PotKind kind_ = PotKind::Logistic;
    double p_ = 0.0;
    std::shared_ptr<const Table> table_;
    std::string name_;
    double sup4_ = 0.0;
    double sup4_argmax_ = 0.0;
    std::optional<double> A_;
    std::optional<double> c1_;
    double C2_ = 0.0;
};

struct ValidationOptions {
    double z_max = 50.0;        // grid spans [-z_max, z_max]
    std::size_t points = 20001; // >= 1e4 per contract
    double symmetry_tol = 1e-12;
};

struct AssumptionCheck {
    bool pass = false;
    std::optional<double> witness_z; // a z where the assumption fails
    std::string detail;
};

struct ValidationReport {
    AssumptionCheck positive_increasing; // assumption 1
    AssumptionCheck symmetry;            // assumption 2: sigma(z)+sigma(-z)=1
    AssumptionCheck tail_bound;          // assumption 3: sigma(2-2z) < 1/z
    AssumptionCheck ratio_bounded;       // assumption 4: finite sampled sup
    double sup4 = 0.0;
    double sup4_argmax = 0.0;
    double sup4_certified = 0.0;
    bool pass() const {
        return positive_increasing.pass && symmetry.pass && tail_bound.pass &&
               ratio_bounded.pass;
    }
};

/// Checks the four pot-function assumptions on a sampled grid. Never throws:
/// a bad sigma produces a failing report with a witness point.
ValidationReport validate_pot(const PotFunction& sigma, const ValidationOptions& opt = {});

/// Recomputes the gap threshold A by coarse log-spaced grid search over
/// (0, 200] plus golden-section refinement; returns nullopt when
/// sigma(-z) z^2 is still growing at the probe boundary.
std::optional<double> compute_A(const PotFunction& sigma);

/// Builds a validated pot function. `spec` is one of "logistic", "erf",
/// "alg:p=<real>". Throws std::invalid_argument on unknown names or p < 1.
PotFunction make_pot(std::string_view spec);
PotFunction make_pot(PotKind kind, double p = 0.0);
/// Loads a custom sigma from a two-column CSV (z, sigma(z)) and validates it;
/// throws std::invalid_argument when validation fails.
PotFunction make_pot_from_table_file(const std::string& path);

}  // namespace eloforge
