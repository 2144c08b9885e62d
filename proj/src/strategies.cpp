#include "eloforge/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eloforge {

RepeatWinResult repeat_win(const PotFunction& sigma, long long k) {
    if (k < 0) throw std::invalid_argument("repeat_win: k must be >= 0");
    RepeatWinResult res;
    res.transcript.n = 2;
    res.transcript.sigma_name = sigma.name();
    res.transcript.moves.reserve(std::size_t(k));
    double r = 0.0;
    for (long long i = 0; i < k; ++i) {
        r += sigma(-2.0 * r);
        res.transcript.moves.push_back({0, 1, 1.0});
    }
    res.rating = r;
    return res;
}

double ladder_potential(const RatingState& state, long long n_k) {
    if (n_k < 0 || std::size_t(n_k) > state.size()) {
        throw std::invalid_argument("ladder_potential: n_k out of range");
    }
    double phi = 0.0;
    for (long long i = 1; i <= n_k; ++i) {
        phi += double(2 * n_k - 2 * i + 1) * state.r[std::size_t(i - 1)];
    }
    return phi;
}

double ladder_guarantee(const PotFunction& sigma, double k) {
    const auto A = sigma.threshold_A();
    if (!A) throw std::invalid_argument("ladder_guarantee: pot function has no threshold A");
    return 1.14 * *sigma.c1() * std::cbrt(k) - *A;
}

LadderRun ladder(const PotFunction& sigma, long long k, const LadderOptions& opt) {
    if (k < 0) throw std::invalid_argument("ladder: k must be >= 0");
    const auto cached_A = sigma.threshold_A();
    if (!cached_A && !opt.threshold_override) {
        throw std::invalid_argument(
            "ladder: sigma(-z) z^2 has no maximizer for this pot function; "
            "use the two-player repeated-win strategy instead");
    }
    const double A = opt.threshold_override.value_or(cached_A.value_or(0.0));
    if (!(A > 0.0)) throw std::invalid_argument("ladder: threshold must be positive");

    LadderRun run;
    run.k = k;
    run.A = A;
    run.guarantee = cached_A ? ladder_guarantee(sigma, double(k))
                             : 1.14 * std::cbrt(sigma(-A) * A * A) * std::cbrt(double(k)) - A;
    const double stop_at = run.guarantee;

    RatingState state = RatingState::origin(2);
    long long max_played = 0; // largest 0-based index that has played
    RatingState cert_state = state;
    long long cert_games = 0;
    std::size_t cursor = 0;

    if (opt.with_transcript) {
        run.transcript = Transcript{};
        run.transcript->sigma_name = sigma.name();
        run.transcript->moves.reserve(std::size_t(std::min<long long>(k, 1 << 22)));
    }

    long long games = 0;
    for (; games < k; ++games) {
        if (opt.early_stop && state.r[0] > stop_at) {
            run.stopped_early = true;
            break;
        }
        // After i beats i+1 only pairs i-1 and i can newly satisfy the
        // condition, so the scan restarts one slot back.
        std::size_t i = cursor > 0 ? cursor - 1 : 0;
        for (;;) {
            state.ensure_size(i + 2);
            if (state.r[i] < state.r[i + 1] + A) break;
            ++i;
        }
        cursor = i;
        if (static_cast<long long>(i) + 1 > max_played) {
            max_played = static_cast<long long>(i) + 1;
            cert_state = state;
            cert_games = games;
        }
        const double x = sigma(state.r[i + 1] - state.r[i]);
        state.r[i] += x;
        state.r[i + 1] -= x;
        if (run.transcript) run.transcript->moves.push_back({int(i), int(i) + 1, 1.0});
    }

    run.games_played = games;
    run.final_state = std::move(state);
    run.n_k = max_played;
    run.players_used = max_played + 1;
    run.r1 = run.final_state.r.empty() ? 0.0 : run.final_state.r[0];
    run.phi = ladder_potential(run.final_state, run.n_k);
    run.player_budget = 2.28 * (sigma.c1() ? *sigma.c1() : std::cbrt(sigma(-A) * A * A)) *
                        std::cbrt(double(k)) / A;
    run.cert_state = std::move(cert_state);
    run.cert_games = cert_games;
    if (run.transcript) run.transcript->n = int(run.players_used);

    auto& cert = run.certificates;
    cert.gap_margin = std::numeric_limits<double>::infinity();
    for (long long i = 0; i + 1 < run.n_k; ++i) {
        const double gap = run.cert_state.r[std::size_t(i)] - run.cert_state.r[std::size_t(i + 1)];
        cert.gap_margin = std::min(cert.gap_margin, gap - A);
    }
    cert.potential_margin = run.phi - 2.0 * sigma(-A) * double(run.games_played);
    cert.player_margin = run.r1 - 0.5 * A * double(run.n_k - 1);
    cert.guarantee_margin = run.r1 - run.guarantee;
    return run;
}

}  // namespace eloforge
