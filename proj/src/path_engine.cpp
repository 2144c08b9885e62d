#include "eloforge/path_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eloforge {

namespace {
constexpr double kTiny = 1e-15; // weights below this emit no edge
}

PathEdge PathEdge::transposition(std::size_t n, int i, int j) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 0);
    std::swap(m[std::size_t(i)], m[std::size_t(j)]);
    return PathEdge::perm(std::move(m));
}

EdgeClass classify(const RatingState& state, const PathEdge& e) {
    if (e.kind == PathEdge::Kind::Perm) return EdgeClass::Permutation;
    return state.r[std::size_t(e.winner)] < state.r[std::size_t(e.loser)] ? EdgeClass::Upset
                                                                          : EdgeClass::NonUpset;
}

RatingState apply_edge(const RatingState& state, const PathEdge& e, const PotFunction& sigma) {
    if (e.kind == PathEdge::Kind::Perm) {
        RatingState out = state;
        apply_permutation(out, e.mapping);
        return out;
    }
    return apply_move(state, Move{e.winner, e.loser, e.t}, sigma);
}

RatingState replay_path(RatingState state, const Path& path, const PotFunction& sigma) {
    for (const PathEdge& e : path) state = apply_edge(state, e, sigma);
    return state;
}

double real_length(const Path& path) {
    double len = 0.0;
    for (const PathEdge& e : path) {
        if (e.kind == PathEdge::Kind::Game) len += e.t;
    }
    return len;
}

double continuous_cost(const RatingState& state, const PathEdge& e, const TailFunctions& tails) {
    if (classify(state, e) != EdgeClass::NonUpset) {
        throw std::invalid_argument("continuous_cost: defined for non-upset game edges only");
    }
    const double z = state.r[std::size_t(e.winner)] - state.r[std::size_t(e.loser)];
    const double shift = 2.0 * tails.pot()(-z) * e.t;
    return tails.f(z + shift) - tails.f(z);
}

double continuous_length(RatingState state, const Path& path, const TailFunctions& tails) {
    double total = 0.0;
    for (const PathEdge& e : path) {
        if (classify(state, e) == EdgeClass::NonUpset) total += continuous_cost(state, e, tails);
        state = apply_edge(state, e, tails.pot());
    }
    return total;
}

Path transcript_to_path(const Transcript& t) {
    std::vector<const PermEdge*> perms;
    perms.reserve(t.perms.size());
    for (const PermEdge& p : t.perms) perms.push_back(&p);
    std::stable_sort(perms.begin(), perms.end(),
                     [](const PermEdge* a, const PermEdge* b) { return a->after_move < b->after_move; });
    Path path;
    std::size_t pi = 0;
    auto flush = [&](int applied) {
        while (pi < perms.size() && perms[pi]->after_move == applied) {
            path.push_back(PathEdge::perm(perms[pi]->mapping));
            ++pi;
        }
    };
    flush(0);
    for (std::size_t i = 0; i < t.moves.size(); ++i) {
        const Move& m = t.moves[i];
        path.push_back(PathEdge::game(m.winner, m.loser, m.t));
        flush(int(i) + 1);
    }
    return path;
}

namespace {

// Emits game edges that move `winner` up (and `loser` down) by `disp` in
// total, each with a pot fraction in (0, 1]. Returns the resulting state.
RatingState emit_game(RatingState state, int winner, int loser, double disp, Path& out,
                      const PotFunction& sigma) {
    while (disp > kTiny) {
        const double s = sigma(state.r[std::size_t(loser)] - state.r[std::size_t(winner)]);
        const double t = std::min(disp / s, 1.0);
        const double x = s * t;
        out.push_back(PathEdge::game(winner, loser, t));
        state.r[std::size_t(winner)] += x;
        state.r[std::size_t(loser)] -= x;
        disp -= x;
    }
    return state;
}

bool rank_swapping(const RatingState& state, const PathEdge& e, const PotFunction& sigma) {
    if (classify(state, e) != EdgeClass::Upset) return false;
    const double z = state.r[std::size_t(e.loser)] - state.r[std::size_t(e.winner)];
    return 2.0 * sigma(z) * e.t > z;
}

// Rank-swapping upset -> reduced game + transposition, preserving the endpoint.
Path rewrite_rank_swap(const RatingState& state, const PathEdge& e, const PotFunction& sigma) {
    const int i = e.winner, j = e.loser;
    const double z = state.r[std::size_t(j)] - state.r[std::size_t(i)];
    const double x = sigma(z) * e.t;
    Path out;
    if (z - x > kTiny) {
        // Winner passes the loser but not the loser's old rating: a smaller
        // upset does the work, the transposition finishes the swap.
        emit_game(state, i, j, z - x, out, sigma);
        const double gamma = out.empty() ? 0.0 : out.front().t;
        if (!(gamma > 0.0 && gamma <= e.t + 1e-12)) {
            throw std::logic_error("rank-swap rewrite: reduced-pot weight out of (0, t]");
        }
    } else if (x - z > kTiny) {
        // Winner passes the loser's old rating: the residual is a non-upset
        // in the reversed direction.
        emit_game(state, j, i, x - z, out, sigma);
        const double gamma = out.empty() ? 0.0 : out.front().t;
        if (!(gamma > 0.0 && gamma < e.t + 1e-12)) {
            throw std::logic_error("rank-swap rewrite: reversed weight out of (0, t)");
        }
    }
    // Exact swap needs only the transposition.
    out.push_back(PathEdge::transposition(state.size(), i, j));
    return out;
}

// (upset u, non-upset v or relabeling) -> edges with the upset moved right or
// removed, preserving the endpoint.
Path rewrite_commute(const RatingState& state, const PathEdge& u, const PathEdge& next,
                     const PotFunction& sigma) {
    const int a = u.winner, b = u.loser;
    const double xu = sigma(state.r[std::size_t(b)] - state.r[std::size_t(a)]) * u.t;
    if (next.kind == PathEdge::Kind::Perm) {
        // Relabel the upset through the permutation.
        std::vector<int> inv(next.mapping.size());
        for (std::size_t idx = 0; idx < next.mapping.size(); ++idx) {
            inv[std::size_t(next.mapping[idx])] = int(idx);
        }
        return {next, PathEdge::game(inv[std::size_t(a)], inv[std::size_t(b)], u.t)};
    }
    const RatingState mid = apply_edge(state, u, sigma);
    const int c = next.winner, d = next.loser;
    const double xv = sigma(mid.r[std::size_t(d)] - mid.r[std::size_t(c)]) * next.t;
    const int dot = (a == c) + (b == d) - (a == d) - (b == c);
    Path out;
    switch (dot) {
        case 0:
            // Disjoint players: the edges commute as written.
            return {next, u};
        case 2: {
            // Same pair again (possible only on an exact tie): merge.
            emit_game(state, a, b, xu + xv, out, sigma);
            return out;
        }
        case 1: {
            // Shared player, same direction: play v first with v's original
            // displacement, then u with u's.
            RatingState rm = emit_game(state, c, d, xv, out, sigma);
            emit_game(rm, a, b, xu, out, sigma);
            return out;
        }
        case -1: {
            // Shared player, opposite direction: route the overlap through
            // the combined direction w = u + v.
            int wi = 0, wj = 0;
            if (b == c) { wi = a; wj = d; } else { wi = c; wj = b; }
            if (xu >= xv) {
                RatingState rm = emit_game(state, wi, wj, xv, out, sigma);
                emit_game(rm, a, b, xu - xv, out, sigma);
            } else {
                RatingState rm = emit_game(state, wi, wj, xu, out, sigma);
                emit_game(rm, c, d, xv - xu, out, sigma);
            }
            return out;
        }
        case -2: {
            // Opposite games between the same pair partially cancel.
            if (xu >= xv) emit_game(state, a, b, xu - xv, out, sigma);
            else emit_game(state, c, d, xv - xu, out, sigma);
            return out;
        }
        default:
            throw std::logic_error("rewrite_commute: impossible direction product");
    }
}

std::vector<RatingState> states_along(const RatingState& start, const Path& path,
                                      const PotFunction& sigma) {
    std::vector<RatingState> states;
    states.reserve(path.size() + 1);
    states.push_back(start);
    for (const PathEdge& e : path) states.push_back(apply_edge(states.back(), e, sigma));
    return states;
}

double state_diff(const RatingState& a, const RatingState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.r[i] - b.r[i]));
    return d;
}

}  // namespace

Path remove_rank_swaps(RatingState start, Path path, const PotFunction& sigma) {
    Path out;
    RatingState state = std::move(start);
    for (const PathEdge& e : path) {
        const RatingState next = apply_edge(state, e, sigma);
        if (e.kind == PathEdge::Kind::Game && rank_swapping(state, e, sigma)) {
            for (PathEdge& re : rewrite_rank_swap(state, e, sigma)) out.push_back(std::move(re));
        } else {
            out.push_back(e);
        }
        state = next;
    }
    return out;
}

Path commute_upsets_right(RatingState start, Path path, const PotFunction& sigma,
                          std::uint64_t* rewrites) {
    std::uint64_t count = 0;
    for (;;) {
        const auto states = states_along(start, path, sigma);
        std::size_t idx = path.size();
        for (std::size_t p = 0; p + 1 < path.size(); ++p) {
            if (classify(states[p], path[p]) != EdgeClass::Upset) continue;
            if (rank_swapping(states[p], path[p], sigma)) {
                throw std::invalid_argument(
                    "commute_upsets_right: rank-swapping upset at edge " + std::to_string(p) +
                    "; remove rank swaps first");
            }
            const EdgeClass nc = classify(states[p + 1], path[p + 1]);
            if (nc == EdgeClass::NonUpset || nc == EdgeClass::Permutation) {
                idx = p;
                break;
            }
        }
        if (idx == path.size()) break;
        Path repl = rewrite_commute(states[idx], path[idx], path[idx + 1], sigma);
        path.erase(path.begin() + long(idx), path.begin() + long(idx) + 2);
        path.insert(path.begin() + long(idx), repl.begin(), repl.end());
        ++count;
        if (count > 10'000'000ULL) {
            throw PipelineCapExceeded("commute_upsets_right: rewrite cap exceeded", path);
        }
    }
    if (rewrites) *rewrites = count;
    return path;
}

Path strip_trailing_upsets(RatingState start, Path path, double R, const PotFunction& sigma) {
    const auto states = states_along(start, path, sigma);
    std::size_t last_nonupset = 0;
    bool any_nonupset = false;
    for (std::size_t p = 0; p < path.size(); ++p) {
        const EdgeClass c = classify(states[p], path[p]);
        if (c == EdgeClass::Upset && rank_swapping(states[p], path[p], sigma)) {
            throw std::invalid_argument("strip_trailing_upsets: rank-swapping upset present");
        }
        if (c == EdgeClass::NonUpset) {
            any_nonupset = true;
            last_nonupset = p;
        }
    }
    Path kept;
    for (std::size_t p = 0; p < path.size(); ++p) {
        if (path[p].kind == PathEdge::Kind::Perm || (any_nonupset && p <= last_nonupset)) {
            if (classify(states[p], path[p]) == EdgeClass::Upset) {
                throw std::invalid_argument("strip_trailing_upsets: upsets are not all trailing");
            }
            kept.push_back(path[p]);
        }
    }
    const RatingState end = replay_path(start, kept, sigma);
    if (!(end.max_rating() >= R - 1e-12)) {
        throw std::invalid_argument(
            "strip_trailing_upsets: endpoint leaves the target set; the path did not reach "
            "rating " + std::to_string(R) + " before its trailing upsets");
    }
    return kept;
}

std::pair<Path, RewriteReport> make_upset_free(const RatingState& start, const Path& path,
                                               double R, const TailFunctions& tails,
                                               const PipelineOptions& opt) {
    const PotFunction& sigma = tails.pot();
    RewriteReport rep;
    rep.original_len = real_length(path);
    rep.c1 = continuous_cost_constant(sigma);
    const RatingState original_end = replay_path(start, path, sigma);

    Path cur = path;
    for (;;) {
        if (rep.total_rewrites > opt.rewrite_cap) {
            throw PipelineCapExceeded(
                "make_upset_free: rewrite cap (" + std::to_string(opt.rewrite_cap) +
                ") exceeded; residual path attached", cur);
        }
        const auto states = states_along(start, cur, sigma);
        // Rank swaps first: the commutation rules assume none are present.
        std::size_t idx = cur.size();
        int kind = 0;
        for (std::size_t p = 0; p < cur.size(); ++p) {
            if (rank_swapping(states[p], cur[p], sigma)) {
                idx = p;
                kind = 1;
                break;
            }
        }
        if (idx == cur.size()) {
            for (std::size_t p = 0; p + 1 < cur.size(); ++p) {
                if (classify(states[p], cur[p]) != EdgeClass::Upset) continue;
                const EdgeClass nc = classify(states[p + 1], cur[p + 1]);
                if (nc == EdgeClass::NonUpset || nc == EdgeClass::Permutation) {
                    idx = p;
                    kind = 2;
                    break;
                }
            }
        }
        if (idx == cur.size()) break;

        const std::size_t span = kind == 1 ? 1 : 2;
        Path repl = kind == 1 ? rewrite_rank_swap(states[idx], cur[idx], sigma)
                              : rewrite_commute(states[idx], cur[idx], cur[idx + 1], sigma);
        const RatingState& before = states[idx + span];
        const RatingState after = replay_path(states[idx], repl, sigma);
        const double err = state_diff(before, after);
        rep.worst_rewrite_error = std::max(rep.worst_rewrite_error, err);
        if (err > opt.per_rewrite_tol) {
            throw std::logic_error("make_upset_free: a rewrite moved the endpoint by " +
                                   std::to_string(err));
        }
        cur.erase(cur.begin() + long(idx), cur.begin() + long(idx) + long(span));
        cur.insert(cur.begin() + long(idx), repl.begin(), repl.end());
        if (kind == 1) ++rep.step1_rewrites; else ++rep.step2_rewrites;
        ++rep.total_rewrites;
    }

    rep.endpoint_error = state_diff(replay_path(start, cur, sigma), original_end);
    const std::size_t pre_strip_edges = cur.size();
    Path result = strip_trailing_upsets(start, cur, R, sigma);
    rep.step3_deleted = pre_strip_edges - result.size();

    rep.rewritten_len = real_length(result);
    rep.continuous_len = continuous_length(start, result, tails);
    rep.length_ratio = rep.original_len > 0.0 ? rep.rewritten_len / rep.original_len : 0.0;
    const auto states = states_along(start, result, sigma);
    rep.upset_free = true;
    for (std::size_t p = 0; p < result.size(); ++p) {
        if (classify(states[p], result[p]) == EdgeClass::Upset) rep.upset_free = false;
    }
    rep.final_max = states.back().max_rating();
    return {std::move(result), rep};
}

}  // namespace eloforge
