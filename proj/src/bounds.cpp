#include "eloforge/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eloforge/strategies.hpp"

namespace eloforge {

PotentialValue potential(const RatingState& state, const TailFunctions& tails) {
    if (state.size() < 1) throw std::invalid_argument("potential: empty state");
    PotentialValue out;
    out.pi.resize(state.size());
    std::iota(out.pi.begin(), out.pi.end(), 0);
    std::stable_sort(out.pi.begin(), out.pi.end(),
                     [&](int a, int b) { return state.r[a] > state.r[b]; });
    for (double v : state.r) out.norm_sq += v * v;
    for (std::size_t l = 0; l + 1 < out.pi.size(); ++l) {
        out.gap_sum += tails.f(state.r[out.pi[l]] - state.r[out.pi[l + 1]]);
    }
    out.value = out.norm_sq + out.gap_sum;
    return out;
}

double continuous_cost_constant(const PotFunction& sigma) {
    return 2.0 * sigma.sup4();
}

double potential_growth_constant(const PotFunction& sigma) {
    return sigma.potential_growth_constant();
}

double potential_floor(double R, const TailFunctions& tails) {
    if (!(R > 0.0)) throw std::invalid_argument("potential_floor: R must be positive");
    return R * R * R / (8.0 * tails.g_inv(R * R / 4.0));
}

double games_floor(double R, const TailFunctions& tails, double C) {
    if (!(R > 0.0)) throw std::invalid_argument("games_floor: R must be positive");
    if (!(C > 0.0)) throw std::invalid_argument("games_floor: C must be positive");
    return C * R * R * R / tails.g_inv(R * R / 4.0);
}

double rating_cap(double k, const TailFunctions& tails, double C, double a,
                  double probe_lo, double probe_hi) {
    if (!(k > 0.0)) throw std::invalid_argument("rating_cap: k must be positive");
    if (!(C > 0.0)) throw std::invalid_argument("rating_cap: C must be positive");
    if (!(a > 0.0)) throw std::invalid_argument("rating_cap: a must be positive");
    // Premise: g(x) >= (a x)^2 for large x, checked on the probe range.
    const int probes = 25;
    for (int i = 0; i < probes; ++i) {
        const double x = probe_lo + (probe_hi - probe_lo) * i / (probes - 1);
        const double gx = tails.g(x);
        if (gx < a * a * x * x * (1.0 - 1e-9)) {
            throw std::invalid_argument("rating_cap: premise g(x) >= (ax)^2 fails at x=" +
                                        std::to_string(x));
        }
    }
    return std::cbrt(k / C) * std::cbrt(tails.g_inv(k / (8.0 * a * C)));
}

double default_games_constant(const PotFunction& sigma) {
    return 1.0 / (8.0 * continuous_cost_constant(sigma) * potential_growth_constant(sigma));
}

double default_growth_a(const PotFunction& sigma) {
    (void)sigma;
    return 1.0;
}

GrowthRates growth_rates(const PotFunction& sigma, double k) {
    if (!(k > 1.0)) throw std::invalid_argument("growth_rates: k must exceed 1");
    GrowthRates g;
    g.sigma_name = sigma.name();
    g.k = k;
    const double lk = std::log(k);
    switch (sigma.kind()) {
        case PotKind::Logistic:
            g.two_player = 0.5 * lk;
            g.unlimited_rate = std::cbrt(k * lk);
            break;
        case PotKind::Algebraic: {
            const double p = sigma.algebraic_p();
            g.two_player = 0.5 * std::pow(1.0 + 1.0 / p, 1.0 / (p + 1.0)) *
                           std::pow(k, 1.0 / (1.0 + p));
            g.unlimited_rate = std::pow(k, 1.0 / 3.0 + 2.0 / (3.0 * (3.0 * p + 1.0)));
            break;
        }
        case PotKind::GaussianErf:
            g.two_player = 0.5 * std::sqrt(lk);
            g.unlimited_rate = std::cbrt(k) * std::pow(lk, 1.0 / 6.0);
            break;
        case PotKind::Custom:
            throw std::invalid_argument("growth_rates: no closed form for a custom pot function");
    }
    return g;
}

BoundReport make_bound_report(const TailFunctions& tails, std::optional<double> k,
                              std::optional<double> R) {
    const PotFunction& sigma = tails.pot();
    BoundReport rep;
    rep.sigma_name = sigma.name();
    rep.k = k;
    rep.R = R;
    rep.C1 = continuous_cost_constant(sigma);
    rep.C2 = potential_growth_constant(sigma);
    rep.C = default_games_constant(sigma);
    rep.a = default_growth_a(sigma);
    if (k) {
        const double mid = 0.5 * tails.f_inv(2.0 * *k);
        rep.two_player_lo = mid - 3.0;
        rep.two_player_hi = mid + 3.0;
        if (sigma.threshold_A()) rep.ladder_lower = ladder_guarantee(sigma, *k);
        rep.cap = rating_cap(*k, tails, rep.C, rep.a);
    }
    if (R) {
        rep.potential_lb = potential_floor(*R, tails);
        rep.games_lb = games_floor(*R, tails, rep.C);
    }
    return rep;
}

}  // namespace eloforge
