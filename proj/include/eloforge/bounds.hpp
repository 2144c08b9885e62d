#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eloforge/dynamics.hpp"
#include "eloforge/tails.hpp"

namespace eloforge {

/// The path potential Phi(r; pi_r) = ||r||^2 + sum_l f(gap_l) over the
/// consecutive gaps of the ratings sorted in non-increasing order.
struct PotentialValue {
    std::vector<int> pi; // sorting permutation: r[pi[l]] >= r[pi[l+1]]
    double norm_sq = 0.0;
    double gap_sum = 0.0;
    double value = 0.0;
};

PotentialValue potential(const RatingState& state, const TailFunctions& tails);

/// 2 * sup4: bounds the continuous cost of a unit-pot non-upset edge.
double continuous_cost_constant(const PotFunction& sigma);

/// 6 + 4*sup4 + 1/sigma(-1): bounds the potential increase per unit pot
/// along non-upset edges. Delegates to the pot function's cached constant.
double potential_growth_constant(const PotFunction& sigma);

/// R^3 / (8 g^{-1}(R^2/4)): every state with max entry >= R has at least this
/// much potential.
double potential_floor(double R, const TailFunctions& tails);

/// C * R^3 / g^{-1}(R^2/4): minimum number of games to reach rating R.
double games_floor(double R, const TailFunctions& tails, double C);

/// C^{-1/3} k^{1/3} g^{-1}(k/(8aC))^{1/3}: the rating cap for k games with
/// unlimited players. Verifies the premise g(x) >= (a x)^2 on a probe range
/// and rejects `a` when it fails.
double rating_cap(double k, const TailFunctions& tails, double C, double a,
                  double probe_lo = 2.0, double probe_hi = 50.0);

/// 1 / (8 C1 C2) with the derived constants for this pot function.
double default_games_constant(const PotFunction& sigma);
/// Per-pot default for the quadratic-growth constant `a` (1.0 for the
/// built-ins, verified by probe inside rating_cap).
double default_growth_a(const PotFunction& sigma);

struct GrowthRates {
    std::string sigma_name;
    double k = 0.0;
    double two_player = 0.0;    // closed-form n = 2 rating
    double unlimited_rate = 0.0; // n = infinity cap growth rate (no constant)
};

/// Closed-form growth rates for the built-in pot functions; rejects custom.
GrowthRates growth_rates(const PotFunction& sigma, double k);

struct BoundReport {
    std::string sigma_name;
    std::optional<double> k;
    std::optional<double> R;
    std::optional<double> two_player_lo;  // 1/2 f^{-1}(2k) - 3
    std::optional<double> two_player_hi;  // 1/2 f^{-1}(2k) + 3
    std::optional<double> ladder_lower;   // 1.14 c1 k^{1/3} - A
    std::optional<double> potential_lb;   // R^3 / (8 g^{-1}(R^2/4))
    std::optional<double> games_lb;       // C R^3 / g^{-1}(R^2/4)
    std::optional<double> cap;            // rating cap at k
    double C1 = 0.0;
    double C2 = 0.0;
    double C = 0.0;
    double a = 0.0;
};

/// Evaluates every bound meaningful for the given query (a game count k, a
/// target rating R, or both).
BoundReport make_bound_report(const TailFunctions& tails, std::optional<double> k,
                              std::optional<double> R);

}  // namespace eloforge
