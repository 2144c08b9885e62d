#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eloforge/potfn.hpp"

namespace eloforge {

/// A vector of ratings, one per player (dense 0-based indices). The model
/// keeps the sum at zero up to floating rounding.
struct RatingState {
    std::vector<double> r;

    static RatingState origin(std::size_t n) { return RatingState{std::vector<double>(n, 0.0)}; }

    std::size_t size() const { return r.size(); }
    double operator[](std::size_t i) const { return r[i]; }
    double& operator[](std::size_t i) { return r[i]; }

    double sum() const;
    double max_rating() const;
    /// Grows the vector with zero-rated players so index i is addressable.
    void ensure_size(std::size_t n) {
        if (r.size() < n) r.resize(n, 0.0);
    }
    std::vector<double> sorted_desc() const;
};

/// One game: `winner` takes sigma(r_loser - r_winner) * t from `loser`.
/// t in (0, 1] is the pot fraction; t = 1 is a standard game.
struct Move {
    int winner = 0;
    int loser = 0;
    double t = 1.0;
};

/// A relabeling applied after `after_move` moves have been played:
/// new_ratings[i] = old_ratings[mapping[i]]. Weight 0.
struct PermEdge {
    int after_move = 0;
    std::vector<int> mapping;
};

struct Transcript {
    int n = 0;
    std::string sigma_name;
    std::vector<Move> moves;
    std::vector<PermEdge> perms;

    double weighted_len() const;

    std::string to_json() const;
    static Transcript from_json(const std::string& text);
    void save(const std::string& path) const;
    static Transcript load(const std::string& path);
};

/// Pure: returns the state after the move. Rejects winner == loser,
/// t outside (0, 1], and indices outside the state.
RatingState apply_move(const RatingState& state, const Move& m, const PotFunction& sigma);

/// True iff the winner is rated strictly below the loser before the move.
/// A tie is not an upset.
bool is_upset(const RatingState& state, const Move& m);

void apply_permutation(RatingState& state, const std::vector<int>& mapping);

struct ReplayResult {
    RatingState final_state;
    std::vector<RatingState> trace; // state after each move (empty unless requested)
    double len = 0.0;               // sum of pot fractions
};

/// Replays a transcript from the origin. Errors carry the offending move index.
ReplayResult replay(const Transcript& t, const PotFunction& sigma, bool with_trace = false);

}  // namespace eloforge
