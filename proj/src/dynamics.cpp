#include "eloforge/dynamics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace eloforge {

using ordered_json = nlohmann::ordered_json;

double RatingState::sum() const {
    return std::accumulate(r.begin(), r.end(), 0.0);
}

double RatingState::max_rating() const {
    if (r.empty()) throw std::logic_error("max_rating of an empty state");
    return *std::max_element(r.begin(), r.end());
}

std::vector<double> RatingState::sorted_desc() const {
    std::vector<double> s = r;
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
}

double Transcript::weighted_len() const {
    double len = 0.0;
    for (const Move& m : moves) len += m.t;
    return len;
}

RatingState apply_move(const RatingState& state, const Move& m, const PotFunction& sigma) {
    if (m.winner == m.loser) throw std::invalid_argument("move: winner == loser");
    if (m.winner < 0 || m.loser < 0 || std::size_t(m.winner) >= state.size() ||
        std::size_t(m.loser) >= state.size()) {
        throw std::invalid_argument("move: player index out of range");
    }
    if (!(m.t > 0.0) || m.t > 1.0) throw std::invalid_argument("move: pot fraction not in (0,1]");
    RatingState out = state;
    const double x = sigma(state.r[m.loser] - state.r[m.winner]) * m.t;
    out.r[m.winner] += x;
    out.r[m.loser] -= x;
    return out;
}

bool is_upset(const RatingState& state, const Move& m) {
    return state.r[m.winner] < state.r[m.loser];
}

void apply_permutation(RatingState& state, const std::vector<int>& mapping) {
    const std::size_t n = state.size();
    if (mapping.size() != n) throw std::invalid_argument("permutation size mismatch");
    std::vector<bool> seen(n, false);
    for (int v : mapping) {
        if (v < 0 || std::size_t(v) >= n || seen[v]) {
            throw std::invalid_argument("mapping is not a permutation");
        }
        seen[v] = true;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = state.r[mapping[i]];
    state.r = std::move(out);
}

ReplayResult replay(const Transcript& t, const PotFunction& sigma, bool with_trace) {
    ReplayResult res;
    res.final_state = RatingState::origin(t.n);

    std::vector<const PermEdge*> perms;
    perms.reserve(t.perms.size());
    for (const PermEdge& p : t.perms) perms.push_back(&p);
    std::stable_sort(perms.begin(), perms.end(),
                     [](const PermEdge* a, const PermEdge* b) { return a->after_move < b->after_move; });

    std::size_t pi = 0;
    auto run_perms = [&](int applied) {
        while (pi < perms.size() && perms[pi]->after_move == applied) {
            apply_permutation(res.final_state, perms[pi]->mapping);
            ++pi;
        }
    };

    run_perms(0);
    for (std::size_t i = 0; i < t.moves.size(); ++i) {
        const Move& m = t.moves[i];
        if (m.winner < 0 || m.loser < 0 || m.winner >= t.n || m.loser >= t.n) {
            throw std::invalid_argument("transcript move " + std::to_string(i) +
                                        ": player index out of range");
        }
        try {
            res.final_state = apply_move(res.final_state, m, sigma);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("transcript move " + std::to_string(i) + ": " + e.what());
        }
        res.len += m.t;
        run_perms(int(i) + 1);
        if (with_trace) res.trace.push_back(res.final_state);
    }
    return res;
}

std::string Transcript::to_json() const {
    ordered_json j;
    j["n"] = n;
    j["sigma"] = sigma_name;
    j["moves"] = ordered_json::array();
    for (const Move& m : moves) {
        j["moves"].push_back({{"w", m.winner}, {"l", m.loser}, {"t", m.t}});
    }
    j["perms"] = ordered_json::array();
    for (const PermEdge& p : perms) {
        j["perms"].push_back({{"after_move", p.after_move}, {"mapping", p.mapping}});
    }
    return j.dump();
}

Transcript Transcript::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed transcript JSON: ") + e.what());
    }
    Transcript t;
    try {
        t.n = j.at("n").get<int>();
        t.sigma_name = j.at("sigma").get<std::string>();
        for (const auto& jm : j.at("moves")) {
            t.moves.push_back({jm.at("w").get<int>(), jm.at("l").get<int>(), jm.at("t").get<double>()});
        }
        if (j.contains("perms")) {
            for (const auto& jp : j.at("perms")) {
                PermEdge p;
                p.after_move = jp.at("after_move").get<int>();
                p.mapping = jp.at("mapping").get<std::vector<int>>();
                t.perms.push_back(std::move(p));
            }
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed transcript JSON: ") + e.what());
    }
    return t;
}

void Transcript::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write transcript file: " + path);
    out << to_json() << "\n";
}

Transcript Transcript::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open transcript file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

}  // namespace eloforge
