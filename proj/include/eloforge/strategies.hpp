#pragma once

#include <optional>

#include "eloforge/dynamics.hpp"
#include "eloforge/potfn.hpp"

namespace eloforge {

struct RepeatWinResult {
    double rating = 0.0;
    Transcript transcript;
};

/// Player 0 beats player 1 for k consecutive unit-pot games from the origin.
RepeatWinResult repeat_win(const PotFunction& sigma, long long k);

/// The ladder potential over the first n_k players of a state:
/// sum_{i=1}^{n_k} (2 n_k - 2i + 1) r_i  (1-based i).
double ladder_potential(const RatingState& state, long long n_k);

/// The rating the ladder guarantees for a budget of k games:
/// 1.14 c1 k^{1/3} - A. Requires the pot function to have a threshold A.
double ladder_guarantee(const PotFunction& sigma, double k);

struct LadderCertificates {
    double gap_margin = 0.0;       // min_i (r_i - r_{i+1}) - A at the certificate state
    double potential_margin = 0.0; // phi - 2 sigma(-A) * games_played
    double player_margin = 0.0;    // r1 - (A/2)(n_k - 1)
    double guarantee_margin = 0.0; // r1 - (1.14 c1 k^{1/3} - A)
    bool all_nonnegative() const {
        return gap_margin >= 0.0 && potential_margin >= 0.0 && player_margin >= 0.0 &&
               guarantee_margin >= 0.0;
    }
};

struct LadderOptions {
    /// Stop as soon as r1 exceeds the guarantee. The stopped run is the
    /// strategy whose player count stays within the budget below.
    bool early_stop = false;
    /// Override for the gap threshold; defaults to the pot function's A.
    std::optional<double> threshold_override;
    bool with_transcript = false;
};

struct LadderRun {
    long long k = 0;            // game budget
    long long games_played = 0; // == k unless stopped early
    bool stopped_early = false;
    double A = 0.0;
    RatingState final_state;
    long long n_k = 0; // one less than the number of players who played
    double r1 = 0.0;
    double phi = 0.0;       // ladder potential of the final state
    double guarantee = 0.0; // 1.14 c1 k^{1/3} - A for the requested budget
    long long players_used = 0;
    double player_budget = 0.0; // 2.28 c1 k^{1/3} / A
    RatingState cert_state;     // just before player n_k+1's first game
    long long cert_games = 0;
    LadderCertificates certificates;
    std::optional<Transcript> transcript;
};

/// Runs the two-step ladder loop: find the smallest i with r_i < r_{i+1} + A,
/// have i beat i+1; repeat for k games (or until the early stop fires).
/// Rejects pot functions without a threshold A.
LadderRun ladder(const PotFunction& sigma, long long k, const LadderOptions& opt = {});

}  // namespace eloforge
