#include "eloforge/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "eloforge/bounds.hpp"
#include "eloforge/strategies.hpp"

namespace eloforge {

namespace {

struct Dfs {
    const PotFunction& sigma;
    int n;
    int k;
    bool reduce;
    double best = -1.0;
    std::vector<Move> best_moves;
    std::vector<Move> cur_moves;
    std::uint64_t nodes = 0;
    std::uint64_t pruned = 0;

    // `vals` is the working state (sorted descending when reducing); `ids`
    // maps working positions to original player identities so the recorded
    // transcript replays without relabelings.
    static bool moves_less(const std::vector<Move>& a, const std::vector<Move>& b) {
        return std::lexicographical_compare(
            a.begin(), a.end(), b.begin(), b.end(), [](const Move& x, const Move& y) {
                return x.winner != y.winner ? x.winner < y.winner : x.loser < y.loser;
            });
    }

    void rec(std::vector<double>& vals, std::vector<int>& ids, int depth) {
        ++nodes;
        const double m = *std::max_element(vals.begin(), vals.end());
        if (depth == k) {
            if (m > best) {
                best = m;
                best_moves = cur_moves;
            } else if (m == best && moves_less(cur_moves, best_moves)) {
                best_moves = cur_moves;
            }
            return;
        }
        // One game moves less than one point, so this bound is admissible.
        if (m + double(k - depth) <= best) {
            ++pruned;
            return;
        }
        std::vector<std::vector<double>> seen;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double x = sigma(vals[std::size_t(j)] - vals[std::size_t(i)]);
                std::vector<double> child = vals;
                child[std::size_t(i)] += x;
                child[std::size_t(j)] -= x;
                std::vector<int> child_ids = ids;
                if (reduce) {
                    // Stable sort keeps equal ratings in position order, so the
                    // canonical child is deterministic.
                    std::vector<int> order(static_cast<std::size_t>(n));
                    std::iota(order.begin(), order.end(), 0);
                    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                        return child[std::size_t(a)] > child[std::size_t(b)];
                    });
                    std::vector<double> sorted(static_cast<std::size_t>(n));
                    std::vector<int> sorted_ids(static_cast<std::size_t>(n));
                    for (int p = 0; p < n; ++p) {
                        sorted[std::size_t(p)] = child[std::size_t(order[std::size_t(p)])];
                        sorted_ids[std::size_t(p)] = child_ids[std::size_t(order[std::size_t(p)])];
                    }
                    if (std::find(seen.begin(), seen.end(), sorted) != seen.end()) continue;
                    seen.push_back(sorted);
                    child = std::move(sorted);
                    child_ids = std::move(sorted_ids);
                }
                cur_moves.push_back({ids[std::size_t(i)], ids[std::size_t(j)], 1.0});
                rec(child, child_ids, depth + 1);
                cur_moves.pop_back();
            }
        }
    }
};

}  // namespace

SearchResult solve(const SearchProblem& p) {
    if (p.n < 2 || p.n > 6) throw std::invalid_argument("search: n must be in [2, 6]");
    if (p.k < 0 || p.k > 12) throw std::invalid_argument("search: k must be in [0, 12]");
    Dfs dfs{p.sigma, p.n, p.k, p.symmetry_reduction};
    std::vector<double> vals(std::size_t(p.n), 0.0);
    std::vector<int> ids(std::size_t(p.n));
    std::iota(ids.begin(), ids.end(), 0);
    dfs.rec(vals, ids, 0);
    SearchResult res;
    res.best_value = dfs.best;
    res.best_transcript.n = p.n;
    res.best_transcript.sigma_name = p.sigma.name();
    res.best_transcript.moves = std::move(dfs.best_moves);
    res.nodes_expanded = dfs.nodes;
    res.pruned = dfs.pruned;
    return res;
}

CompareReport compare(const SearchProblem& p, const TailFunctions& tails) {
    const SearchResult sr = solve(p);
    CompareReport rep;
    rep.optimum = sr.best_value;
    rep.repeat_win_value = repeat_win(p.sigma, p.k).rating;
    if (p.sigma.threshold_A()) rep.ladder_value = ladder(p.sigma, p.k).r1;
    const double mid = 0.5 * tails.f_inv(2.0 * double(p.k));
    rep.two_player_lo = mid - 3.0;
    rep.two_player_hi = mid + 3.0;
    rep.cap = p.k > 0 ? rating_cap(double(p.k), tails, default_games_constant(p.sigma),
                                   default_growth_a(p.sigma))
                      : 0.0;
    const double eps = 1e-9;
    rep.optimum_below_strategies = rep.optimum < rep.repeat_win_value - eps ||
                                   (rep.ladder_value && rep.optimum < *rep.ladder_value - eps);
    rep.optimum_above_cap = p.k > 0 && rep.optimum > rep.cap + eps;
    rep.n2_outside_interval =
        p.n == 2 && (rep.optimum < rep.two_player_lo - eps || rep.optimum > rep.two_player_hi + eps);
    rep.n2_matches_repeat_win = std::abs(rep.optimum - rep.repeat_win_value) <= 1e-12;
    return rep;
}

}  // namespace eloforge
