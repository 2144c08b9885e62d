#pragma once

#include <cstdint>
#include <optional>

#include "eloforge/dynamics.hpp"
#include "eloforge/tails.hpp"

namespace eloforge {

/// Exhaustive search over unit-pot game sequences: which sequence of k games
/// among n players maximizes the final top rating?
struct SearchProblem {
    PotFunction sigma;
    int n = 2; // <= 6
    int k = 0; // <= 12
    bool symmetry_reduction = true;
};

struct SearchResult {
    double best_value = 0.0;
    Transcript best_transcript;
    std::uint64_t nodes_expanded = 0;
    std::uint64_t pruned = 0;
};

/// Depth-first enumeration of all n(n-1) winner/loser choices per game, with
/// optional canonicalization by descending sort (sound because the dynamics
/// and the objective are permutation-equivariant) and admissible pruning
/// (current max + remaining games bounds anything reachable, since a game
/// transfers less than one point).
SearchResult solve(const SearchProblem& p);

struct CompareReport {
    double optimum = 0.0;
    double repeat_win_value = 0.0;
    std::optional<double> ladder_value; // absent when sigma has no threshold A
    double two_player_lo = 0.0;         // 1/2 f^{-1}(2k) - 3
    double two_player_hi = 0.0;
    double cap = 0.0;                   // unlimited-player rating cap
    bool optimum_below_strategies = false; // impossible unless the solver is wrong
    bool optimum_above_cap = false;        // would falsify the implementation
    bool n2_outside_interval = false;      // only meaningful when n == 2
    bool n2_matches_repeat_win = false;    // observed finding, not asserted
    bool violation() const {
        return optimum_below_strategies || optimum_above_cap || n2_outside_interval;
    }
};

/// Solves the problem and checks the optimum against every strategy value and
/// every proved bound at this scale.
CompareReport compare(const SearchProblem& p, const TailFunctions& tails);

}  // namespace eloforge
