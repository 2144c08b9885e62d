#include <doctest.h>

#include <cmath>
#include <random>

#include "eloforge/path_engine.hpp"
#include "eloforge/strategies.hpp"
#include "oracles.hpp"

using namespace eloforge;

namespace {
const PotFunction& lg() {
    static const PotFunction p = PotFunction::logistic();
    return p;
}
const TailFunctions& lg_tails() {
    static const TailFunctions t(lg());
    return t;
}

double max_diff(const RatingState& a, const RatingState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Random path over n players reaching max rating >= R: a mixed prefix padded
// with leader wins.
Path random_path(std::mt19937_64& rng, int n, int prefix_edges, double R,
                 double perm_prob = 0.1) {
    std::uniform_real_distribution<double> dt(0.05, 1.0);
    std::uniform_real_distribution<double> du(0.0, 1.0);
    Path path;
    RatingState s = RatingState::origin(std::size_t(n));
    for (int e = 0; e < prefix_edges; ++e) {
        if (du(rng) < perm_prob) {
            std::vector<int> m(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) m[std::size_t(i)] = i;
            std::shuffle(m.begin(), m.end(), rng);
            path.push_back(PathEdge::perm(m));
            s = apply_edge(s, path.back(), lg());
        }
        int w = int(rng() % std::uint64_t(n)), l = int(rng() % std::uint64_t(n));
        if (w == l) continue;
        path.push_back(PathEdge::game(w, l, dt(rng)));
        s = apply_edge(s, path.back(), lg());
    }
    for (int guard = 0; guard < 30 && s.max_rating() < R; ++guard) {
        int lead = 0, low = 0;
        for (int i = 1; i < n; ++i) {
            if (s[std::size_t(i)] > s[std::size_t(lead)]) lead = i;
            if (s[std::size_t(i)] < s[std::size_t(low)]) low = i;
        }
        path.push_back(PathEdge::game(lead, low, 1.0));
        s = apply_edge(s, path.back(), lg());
    }
    return path;
}
}  // namespace

TEST_CASE("continuous cost: limits, the origin edge, and the constant bound") {
    const RatingState origin = RatingState::origin(2);
    // vanishing pot fraction: vanishing cost
    CHECK(continuous_cost(origin, PathEdge::game(0, 1, 1e-12), lg_tails()) ==
          doctest::Approx(0.0).epsilon(1e-9));
    // z = 0, shift = 2 sigma(0) = 1: cost = f(1) - f(0) = e
    CHECK(continuous_cost(origin, PathEdge::game(0, 1, 1.0), lg_tails()) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-9));

    const double C1 = continuous_cost_constant(lg());
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dr(-4.0, 4.0), dt(0.01, 1.0);
    for (int i = 0; i < 2000; ++i) {
        RatingState s = RatingState::origin(2);
        s.r = {dr(rng), dr(rng)};
        if (s[0] < s[1]) std::swap(s.r[0], s.r[1]);
        const double t = dt(rng);
        CHECK(continuous_cost(s, PathEdge::game(0, 1, t), lg_tails()) <= C1 * t + 1e-9);
    }
}

TEST_CASE("continuous cost rejects upsets and relabelings") {
    RatingState s = RatingState::origin(2);
    s.r = {-0.5, 0.5};
    CHECK_THROWS_AS(continuous_cost(s, PathEdge::game(0, 1, 1.0), lg_tails()),
                    std::invalid_argument);
    CHECK_THROWS_AS(continuous_cost(s, PathEdge::transposition(2, 0, 1), lg_tails()),
                    std::invalid_argument);
}

TEST_CASE("rank-swap removal: partial surpass becomes a reduced upset plus a swap") {
    RatingState s = RatingState::origin(2);
    s.r = {-0.5, 0.5};
    const PathEdge e = PathEdge::game(0, 1, 1.0); // upset: z = 1, transfer ~ 0.731
    REQUIRE(classify(s, e) == EdgeClass::Upset);
    const RatingState direct = apply_edge(s, e, lg());
    CHECK(direct[0] == doctest::Approx(0.2310585786).epsilon(1e-9));

    const Path out = remove_rank_swaps(s, {e}, lg());
    REQUIRE(out.size() == 2);
    CHECK(out[0].kind == PathEdge::Kind::Game);
    CHECK(out[0].winner == 0);
    CHECK(out[0].loser == 1);
    // gamma = z/sigma(z) - t = 1/sigma(1) - 1
    CHECK(out[0].t == doctest::Approx(1.0 / lg()(1.0) - 1.0).epsilon(1e-9));
    CHECK(out[0].t == doctest::Approx(0.3678794).epsilon(1e-6));
    CHECK(out[1].kind == PathEdge::Kind::Perm);
    CHECK(max_diff(replay_path(s, out, lg()), direct) <= 1e-12);
    // the reduced edge is still an upset but no longer rank-swapping
    CHECK(classify(s, out[0]) == EdgeClass::Upset);
}

TEST_CASE("rank-swap removal: full surpass becomes a reversed non-upset plus a swap") {
    RatingState s = RatingState::origin(2);
    s.r = {0.1, 0.0};
    const PathEdge e = PathEdge::game(1, 0, 1.0); // upset with x - z = 0.42 > 0
    const RatingState direct = apply_edge(s, e, lg());
    const Path out = remove_rank_swaps(s, {e}, lg());
    REQUIRE(out.size() == 2);
    CHECK(out[0].winner == 0); // reversed direction
    CHECK(out[0].loser == 1);
    CHECK(classify(s, out[0]) == EdgeClass::NonUpset);
    CHECK(out[0].t < 1.0);
    CHECK(out[0].t > 0.0);
    CHECK(out[1].kind == PathEdge::Kind::Perm);
    CHECK(max_diff(replay_path(s, out, lg()), direct) <= 1e-12);
}

TEST_CASE("rank-swap removal: an exact swap is a pure transposition") {
    // sigma(z) = z at z* ~ 0.659: a unit game then transfers exactly z*.
    const double zstar =
        oracles::bisect([](double z) { return lg()(z) - z; }, 0.0, 1.0, 0.2); // decreasing
    RatingState s = RatingState::origin(2);
    s.r = {-0.5 * zstar, 0.5 * zstar};
    const PathEdge e = PathEdge::game(0, 1, 1.0);
    const RatingState direct = apply_edge(s, e, lg());
    const Path out = remove_rank_swaps(s, {e}, lg());
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == PathEdge::Kind::Perm);
    CHECK(max_diff(replay_path(s, out, lg()), direct) <= 1e-12);
}

TEST_CASE("rank-swap removal leaves other edges alone") {
    RatingState s = RatingState::origin(3);
    s.r = {1.0, 0.0, -1.0};
    const Path path = {PathEdge::game(0, 1, 0.7), PathEdge::game(2, 1, 0.1)};
    // edge 0 is a non-upset; edge 1 is an upset that does not rank-swap
    const Path out = remove_rank_swaps(s, path, lg());
    REQUIRE(out.size() == 2);
    CHECK(out[0].t == 0.7);
    CHECK(out[1].t == 0.1);
}

TEST_CASE("commuting disjoint edges swaps them exactly") {
    RatingState s = RatingState::origin(4);
    s.r = {-0.3, 0.3, 0.2, -0.2};
    const Path path = {PathEdge::game(0, 1, 0.3), PathEdge::game(2, 3, 0.4)};
    REQUIRE(classify(s, path[0]) == EdgeClass::Upset);
    const RatingState direct = replay_path(s, path, lg());
    const Path out = commute_upsets_right(s, path, lg());
    REQUIRE(out.size() == 2);
    CHECK(out[0].winner == 2);
    CHECK(out[1].winner == 0);
    CHECK(max_diff(replay_path(s, out, lg()), direct) == 0.0);
}

TEST_CASE("commuting a shared-winner pair preserves the endpoint") {
    // u = (0 beats 1) upset, then v = (0 beats 2) non-upset: direction product 1.
    // t_u kept below z/(2 sigma(z)) so the upset does not rank-swap.
    RatingState s = RatingState::origin(3);
    s.r = {0.0, 0.4, -0.4};
    const Path path = {PathEdge::game(0, 1, 0.3), PathEdge::game(0, 2, 0.5)};
    REQUIRE(classify(s, path[0]) == EdgeClass::Upset);
    const RatingState direct = replay_path(s, path, lg());
    const Path out = commute_upsets_right(s, path, lg());
    CHECK(max_diff(replay_path(s, out, lg()), direct) <= 1e-9);
    // the upset now sits at the tail (or vanished)
    RatingState cur = s;
    bool seen_upset = false;
    for (const PathEdge& e : out) {
        const EdgeClass c = classify(cur, e);
        if (c == EdgeClass::Upset) seen_upset = true;
        else if (c == EdgeClass::NonUpset) CHECK_FALSE(seen_upset);
        cur = apply_edge(cur, e, lg());
    }
}

TEST_CASE("the rank-swapping shared-winner instance goes through the full pipeline") {
    // With t_u = 0.5 the upset at (0, 0.4, -0.4) does rank-swap, so the
    // pipeline first reduces it, then commutes; the endpoint must replay.
    RatingState s = RatingState::origin(3);
    const Path path = {PathEdge::game(0, 1, 1.0), PathEdge::game(0, 1, 1.0),
                       PathEdge::game(0, 2, 1.0), PathEdge::game(1, 0, 0.5),
                       PathEdge::game(0, 2, 0.5)};
    const TailFunctions tails(lg());
    const auto [out, rep] = make_upset_free(s, path, 1.0, tails);
    CHECK(rep.upset_free);
    CHECK(rep.endpoint_error <= 1e-9);
}

TEST_CASE("commuting an opposed pair: both branches preserve the endpoint") {
    RatingState s = RatingState::origin(3);
    s.r = {0.0, 0.4, -0.4};
    // u = (0 beats 1) upset without a rank swap; v = (1 beats 2): product -1.
    for (double tv : {0.1, 0.9}) { // small tv: u-transfer dominates; large: v dominates
        CAPTURE(tv);
        const Path path = {PathEdge::game(0, 1, 0.3), PathEdge::game(1, 2, tv)};
        RatingState mid = apply_edge(s, path[0], lg());
        REQUIRE(classify(s, path[0]) == EdgeClass::Upset);
        REQUIRE(classify(mid, path[1]) == EdgeClass::NonUpset);
        const RatingState direct = replay_path(s, path, lg());
        const Path out = commute_upsets_right(s, path, lg());
        CHECK(max_diff(replay_path(s, out, lg()), direct) <= 1e-9);
    }
}

TEST_CASE("an opposed pair on the same two players cancels") {
    RatingState s = RatingState::origin(2);
    s.r = {-0.2, 0.2};
    const double xu = lg()(0.4) * 0.25;
    RatingState mid = s;
    mid.r[0] += xu;
    mid.r[1] -= xu;
    // choose tv so the reverse game undoes the upset exactly
    const double tv = xu / lg()(mid[0] - mid[1]);
    REQUIRE(tv <= 1.0);
    const Path path = {PathEdge::game(0, 1, 0.25), PathEdge::game(1, 0, tv)};
    const RatingState direct = replay_path(s, path, lg());
    CHECK(max_diff(direct, s) <= 1e-12); // they cancel
    const Path out = commute_upsets_right(s, path, lg());
    CHECK(out.empty());
}

TEST_CASE("upsets commute through relabelings") {
    RatingState s = RatingState::origin(3);
    s.r = {-0.3, 0.3, 0.0};
    const Path path = {PathEdge::game(0, 1, 0.4), PathEdge::perm({2, 0, 1})};
    const RatingState direct = replay_path(s, path, lg());
    const Path out = commute_upsets_right(s, path, lg());
    REQUIRE(out.size() == 2);
    CHECK(out[0].kind == PathEdge::Kind::Perm);
    CHECK(out[1].kind == PathEdge::Kind::Game);
    CHECK(max_diff(replay_path(s, out, lg()), direct) <= 1e-12);
}

TEST_CASE("commute_upsets_right rejects rank-swapping input") {
    RatingState s = RatingState::origin(2);
    s.r = {-0.5, 0.5};
    const Path path = {PathEdge::game(0, 1, 1.0), PathEdge::game(0, 1, 1.0)};
    CHECK_THROWS_AS(commute_upsets_right(s, path, lg()), std::invalid_argument);
}

TEST_CASE("stripping removes trailing upsets and keeps the target set") {
    RatingState s = RatingState::origin(3);
    // a win chain reaching 1.0, then a trailing upset
    Path path;
    RatingState cur = s;
    for (int i = 0; i < 4; ++i) {
        path.push_back(PathEdge::game(0, 1, 1.0));
        cur = apply_edge(cur, path.back(), lg());
    }
    const double reached = cur.max_rating();
    REQUIRE(reached >= 1.0);
    path.push_back(PathEdge::game(2, 0, 0.3)); // upset against the leader
    const Path out = strip_trailing_upsets(s, path, 1.0, lg());
    CHECK(out.size() == 4);
    CHECK(replay_path(s, out, lg()).max_rating() == reached);

    // an upset-free path passes through unchanged
    const Path clean = {PathEdge::game(0, 1, 1.0)};
    CHECK(strip_trailing_upsets(s, clean, 0.5, lg()).size() == 1);

    // and a path that never reached R fails loudly
    const Path weak = {PathEdge::game(0, 1, 0.2)};
    CHECK_THROWS_AS(strip_trailing_upsets(s, weak, 1.0, lg()), std::invalid_argument);
}

TEST_CASE("full pipeline on an already-clean path is the identity in length") {
    const RatingState s = RatingState::origin(2);
    Path path;
    for (int i = 0; i < 4; ++i) path.push_back(PathEdge::game(0, 1, 1.0));
    const auto [out, rep] = make_upset_free(s, path, 1.0, lg_tails());
    CHECK(out.size() == 4);
    CHECK(rep.length_ratio == doctest::Approx(1.0));
    CHECK(rep.total_rewrites == 0);
    CHECK(rep.upset_free);
    CHECK(rep.endpoint_error == 0.0);
}

TEST_CASE("full pipeline certifies seeded random paths") {
    std::mt19937_64 rng(42);
    const double C1 = continuous_cost_constant(lg());
    const double C2 = potential_growth_constant(lg());
    int done = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + int(rng() % 4);
        const Path path = random_path(rng, n, 5 + int(rng() % 36), 1.0);
        const RatingState start = RatingState::origin(std::size_t(n));
        if (replay_path(start, path, lg()).max_rating() < 1.0) continue;
        const auto [out, rep] = make_upset_free(start, path, 1.0, lg_tails());
        CAPTURE(trial);
        CHECK(rep.upset_free);
        CHECK(rep.endpoint_error <= 1e-7);
        CHECK(rep.worst_rewrite_error <= 1e-9);
        CHECK(rep.final_max >= 1.0 - 1e-12);
        CHECK(rep.rewritten_len <= C1 * rep.original_len + 1e-9);
        CHECK(rep.continuous_len <= C1 * rep.original_len + 1e-9);
        // potential chain: Phi(end) <= C2 * len for the upset-free path
        RatingState end = replay_path(start, out, lg());
        CHECK(potential(end, lg_tails()).value <= C2 * rep.rewritten_len + 1e-9);
        ++done;
    }
    CHECK(done >= 95);
}

TEST_CASE("pipeline weights stay in (0, 1]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + int(rng() % 4);
        const Path path = random_path(rng, n, 30, 1.0);
        const RatingState start = RatingState::origin(std::size_t(n));
        if (replay_path(start, path, lg()).max_rating() < 1.0) continue;
        const auto [out, rep] = make_upset_free(start, path, 1.0, lg_tails());
        (void)rep;
        for (const PathEdge& e : out) {
            if (e.kind != PathEdge::Kind::Game) continue;
            CHECK(e.t > 0.0);
            CHECK(e.t <= 1.0);
        }
    }
}

TEST_CASE("transcripts convert to paths with interleaved relabelings") {
    Transcript t;
    t.n = 3;
    t.sigma_name = "logistic";
    t.moves = {{0, 1, 1.0}, {1, 2, 0.5}};
    t.perms = {{1, {1, 0, 2}}, {0, {2, 1, 0}}};
    const Path p = transcript_to_path(t);
    REQUIRE(p.size() == 4);
    CHECK(p[0].kind == PathEdge::Kind::Perm); // after_move 0 comes first
    CHECK(p[1].kind == PathEdge::Kind::Game);
    CHECK(p[2].kind == PathEdge::Kind::Perm);
    CHECK(p[3].kind == PathEdge::Kind::Game);
    const RatingState via_path = replay_path(RatingState::origin(3), p, lg());
    const RatingState via_replay = replay(t, lg()).final_state;
    CHECK(max_diff(via_path, via_replay) == 0.0);
}
