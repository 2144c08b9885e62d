#include <doctest.h>

#include <cmath>
#include <random>

#include "eloforge/strategies.hpp"
#include "eloforge/tails.hpp"
#include "oracles.hpp"

using namespace eloforge;

namespace {
const PotFunction& lg() {
    static const PotFunction p = PotFunction::logistic();
    return p;
}
}  // namespace

TEST_CASE("repeat_win follows the recurrence r += sigma(-2r)") {
    CHECK(repeat_win(lg(), 0).rating == 0.0);
    CHECK(repeat_win(lg(), 1).rating == 0.5);
    const RepeatWinResult r100 = repeat_win(lg(), 100);
    CHECK(r100.rating == doctest::Approx(2.65060025659).epsilon(1e-9));
    CHECK(r100.transcript.moves.size() == 100);
    // two-player growth interval: |r(k) - f^{-1}(2k)/2| <= 3
    const TailFunctions t(lg());
    const double mid = 0.5 * t.f_inv(200.0);
    CHECK(mid == doctest::Approx(2.63835).epsilon(1e-4));
    CHECK(std::abs(r100.rating - mid) <= 3.0);
    CHECK_THROWS_AS(repeat_win(lg(), -1), std::invalid_argument);
}

TEST_CASE("ladder_potential: examples and the telescoping identity") {
    RatingState origin = RatingState::origin(4);
    CHECK(ladder_potential(origin, 3) == 0.0);

    RatingState s = RatingState::origin(2);
    s.r = {1.0, -1.0};
    CHECK(ladder_potential(s, 2) == 2.0); // 3*1 + 1*(-1)

    // phi = n_k^2 r_1 + sum (n_k - i)^2 (r_{i+1} - r_i)
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> dr(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        RatingState st = RatingState::origin(8);
        for (auto& v : st.r) v = dr(rng);
        const long long nk = 1 + long(rng() % 8);
        double tele = double(nk * nk) * st[0];
        for (long long i = 1; i <= nk - 1; ++i) {
            const double d = st[std::size_t(i)] - st[std::size_t(i - 1)];
            tele += double((nk - i) * (nk - i)) * d;
        }
        CHECK(ladder_potential(st, nk) == doctest::Approx(tele).epsilon(1e-9));
    }
}

TEST_CASE("a transfer between interior rungs raises the potential by 2x") {
    RatingState s = RatingState::origin(6);
    s.r = {5.0, 3.0, 1.0, -2.0, -3.0, -4.0};
    const long long nk = 5;
    const double before = ladder_potential(s, nk);
    const double x = 0.37;
    s.r[2] += x;
    s.r[3] -= x;
    CHECK(ladder_potential(s, nk) - before == doctest::Approx(2.0 * x).epsilon(1e-12));
}

TEST_CASE("ladder on tiny budgets matches the hand trace") {
    const LadderRun r1 = ladder(lg(), 1);
    CHECK(r1.r1 == 0.5);
    CHECK(r1.n_k == 1);
    CHECK(r1.players_used == 2);

    // 0.5 < -0.5 + A (A ~ 2.2177) so the same pair plays again
    const LadderRun r2 = ladder(lg(), 2);
    CHECK(r2.r1 == doctest::Approx(0.76894).epsilon(1e-4));
    CHECK(r2.n_k == 1);
}

TEST_CASE("ladder rejects pot functions without a threshold") {
    CHECK_THROWS_AS(ladder(PotFunction::algebraic(1.0), 10), std::invalid_argument);
    // but runs with an explicit override
    LadderOptions opt;
    opt.threshold_override = 2.0;
    const LadderRun r = ladder(PotFunction::algebraic(1.0), 50, opt);
    CHECK(r.games_played == 50);
    CHECK(r.r1 > 0.0);
}

TEST_CASE("ladder certificates hold on full runs") {
    for (long long k : {100LL, 1000LL, 10000LL}) {
        CAPTURE(k);
        const LadderRun run = ladder(lg(), k);
        CHECK(run.games_played == k);
        CHECK(run.certificates.gap_margin >= 0.0);
        CHECK(run.certificates.potential_margin >= 0.0);
        CHECK(run.certificates.player_margin >= 0.0);
        CHECK(run.certificates.guarantee_margin >= 0.0);
        CHECK(std::abs(run.final_state.sum()) <= 1e-9 * double(run.final_state.size()));
    }
}

TEST_CASE("early stop halts within one point of the guarantee") {
    for (long long k : {1000LL, 10000LL}) {
        CAPTURE(k);
        LadderOptions opt;
        opt.early_stop = true;
        const LadderRun run = ladder(lg(), k, opt);
        CHECK(run.stopped_early);
        CHECK(run.games_played < k);
        CHECK(run.r1 >= run.guarantee);
        CHECK(run.r1 <= run.guarantee + 1.0);
        CHECK(double(run.players_used) <= run.player_budget);
        CHECK(run.certificates.all_nonnegative());
    }
}

TEST_CASE("the cursor scan matches a naive full scan") {
    // Reference implementation: scan from player 0 every game.
    const auto naive = [&](long long k, double A) {
        RatingState s = RatingState::origin(2);
        std::vector<int> moves;
        for (long long g = 0; g < k; ++g) {
            std::size_t i = 0;
            for (;; ++i) {
                s.ensure_size(i + 2);
                if (s.r[i] < s.r[i + 1] + A) break;
            }
            moves.push_back(int(i));
            const double x = lg()(s.r[i + 1] - s.r[i]);
            s.r[i] += x;
            s.r[i + 1] -= x;
        }
        return std::pair{s, moves};
    };
    const double A = *lg().threshold_A();
    LadderOptions opt;
    opt.with_transcript = true;
    const LadderRun run = ladder(lg(), 10000, opt);
    const auto [ns, nmoves] = naive(10000, A);
    REQUIRE(run.transcript);
    REQUIRE(run.transcript->moves.size() == nmoves.size());
    for (std::size_t i = 0; i < nmoves.size(); ++i) {
        CHECK(run.transcript->moves[i].winner == nmoves[i]);
    }
    CHECK(run.final_state.r == std::vector<double>(ns.r.begin(), ns.r.begin() + long(run.final_state.size())));
}

TEST_CASE("ladder transcript replays to the final state") {
    LadderOptions opt;
    opt.with_transcript = true;
    const LadderRun run = ladder(lg(), 500, opt);
    REQUIRE(run.transcript);
    const ReplayResult rr = replay(*run.transcript, lg());
    for (std::size_t i = 0; i < run.final_state.size(); ++i) {
        CHECK(rr.final_state[i] == doctest::Approx(run.final_state[i]).epsilon(1e-12));
    }
}

TEST_CASE("ladder_guarantee evaluates 1.14 c1 k^{1/3} - A") {
    const double g = ladder_guarantee(lg(), 1e6);
    CHECK(g == doctest::Approx(1.14 * 0.7845093 * 100.0 - 2.2177151).epsilon(1e-5));
    CHECK_THROWS_AS(ladder_guarantee(PotFunction::algebraic(1.0), 100.0), std::invalid_argument);
}
