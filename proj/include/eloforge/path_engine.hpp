#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "eloforge/bounds.hpp"
#include "eloforge/dynamics.hpp"
#include "eloforge/tails.hpp"

namespace eloforge {

/// One edge of a rating-graph path: either a game with a pot fraction in
/// (0, 1], or a weight-0 relabeling of the players.
struct PathEdge {
    enum class Kind { Game, Perm };
    Kind kind = Kind::Game;
    int winner = 0;
    int loser = 0;
    double t = 1.0;
    std::vector<int> mapping; // Perm only: new[i] = old[mapping[i]]

    static PathEdge game(int winner, int loser, double t) {
        PathEdge e;
        e.winner = winner;
        e.loser = loser;
        e.t = t;
        return e;
    }
    static PathEdge perm(std::vector<int> mapping) {
        PathEdge e;
        e.kind = Kind::Perm;
        e.mapping = std::move(mapping);
        return e;
    }
    static PathEdge transposition(std::size_t n, int i, int j);
};

using Path = std::vector<PathEdge>;

enum class EdgeClass { NonUpset, Upset, Permutation };

EdgeClass classify(const RatingState& state, const PathEdge& e);

RatingState apply_edge(const RatingState& state, const PathEdge& e, const PotFunction& sigma);
RatingState replay_path(RatingState state, const Path& path, const PotFunction& sigma);

double real_length(const Path& path);

/// f(z + 2 sigma(-z) t) - f(z) with z the winner-loser rating gap; defined
/// for non-upset game edges only.
double continuous_cost(const RatingState& state, const PathEdge& e, const TailFunctions& tails);
/// Sum of continuous costs of the non-upset edges along the path.
double continuous_length(RatingState state, const Path& path, const TailFunctions& tails);

Path transcript_to_path(const Transcript& t);

/// Replaces every rank-swapping upset (the winner ends above the loser) by
/// the reduced game plus a transposition; other edges pass through.
Path remove_rank_swaps(RatingState start, Path path, const PotFunction& sigma);

/// Commutes upsets past later non-upsets and relabelings until every upset is
/// trailing. Requires a rank-swap-free input and throws std::invalid_argument
/// otherwise.
Path commute_upsets_right(RatingState start, Path path, const PotFunction& sigma,
                          std::uint64_t* rewrites = nullptr);

/// Deletes the trailing upsets; the remaining endpoint must still have an
/// entry >= R, else throws std::invalid_argument.
Path strip_trailing_upsets(RatingState start, Path path, double R, const PotFunction& sigma);

struct RewriteReport {
    double original_len = 0.0;
    double rewritten_len = 0.0;
    double continuous_len = 0.0;
    double endpoint_error = 0.0;       // pre-strip endpoint vs the original path
    double worst_rewrite_error = 0.0;  // max per-rewrite endpoint discrepancy
    std::uint64_t step1_rewrites = 0;
    std::uint64_t step2_rewrites = 0;
    std::uint64_t step3_deleted = 0;
    std::uint64_t total_rewrites = 0;
    bool upset_free = false;
    double final_max = 0.0;
    double length_ratio = 0.0; // rewritten_len / original_len
    double c1 = 0.0;           // the constant the ratio is certified against
};

struct PipelineCapExceeded : std::runtime_error {
    PipelineCapExceeded(std::string what, Path residual_path)
        : std::runtime_error(std::move(what)), residual(std::move(residual_path)) {}
    Path residual;
};

struct PipelineOptions {
    std::uint64_t rewrite_cap = 1'000'000;
    double per_rewrite_tol = 1e-9;
};

/// Full rewrite pipeline: removes rank swaps, commutes the remaining upsets
/// to the tail, strips them, and certifies the endpoint and length ratio.
/// The input must start at `start` and reach max rating >= R.
std::pair<Path, RewriteReport> make_upset_free(const RatingState& start, const Path& path,
                                               double R, const TailFunctions& tails,
                                               const PipelineOptions& opt = {});

}  // namespace eloforge
