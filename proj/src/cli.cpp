#include "eloforge/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eloforge/bounds.hpp"
#include "eloforge/dynamics.hpp"
#include "eloforge/path_engine.hpp"
#include "eloforge/potfn.hpp"
#include "eloforge/search.hpp"
#include "eloforge/strategies.hpp"
#include "eloforge/tails.hpp"

namespace eloforge {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    q += "\"";
    return q;
}

namespace {

struct Common {
    std::string sigma = "logistic";
    std::string table_file;
    std::string out_path;
    long long seed = 0;
    double quad_tol = 0.0; // 0: use env/default
};

void add_common(CLI::App* cmd, Common& c, bool with_sigma = true) {
    if (with_sigma) {
        cmd->add_option("--sigma", c.sigma,
                        "pot function: logistic, erf, alg:p=<real> (default logistic)");
        cmd->add_option("--table", c.table_file,
                        "custom pot function as a two-column CSV of z,sigma(z)");
    }
    cmd->add_option("--out", c.out_path, "write output here instead of stdout");
    cmd->add_option("--seed", c.seed, "seed for randomized suites (default 0)");
    cmd->add_option("--quad-tol", c.quad_tol,
                    "quadrature tolerance override (also: ELOFORGE_QUAD_TOL)");
}

PotFunction resolve_pot(const Common& c) {
    if (!c.table_file.empty()) return make_pot_from_table_file(c.table_file);
    return make_pot(c.sigma);
}

double resolve_quad_tol(const Common& c) {
    return c.quad_tol > 0.0 ? c.quad_tol : TailFunctions::default_quad_tol();
}

class Output {
  public:
    explicit Output(const Common& c, std::ostream& fallback) : fallback_(fallback) {
        if (!c.out_path.empty()) {
            file_.open(c.out_path);
            if (!file_) throw std::runtime_error("--out: cannot open " + c.out_path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

  private:
    std::ofstream file_;
    std::ostream& fallback_;
};

void write_config_header(std::ostream& os, const std::string& cmd, const Common& c,
                         ordered_json extra, bool include_sigma = true) {
    ordered_json j;
    j["cmd"] = cmd;
    if (include_sigma) {
        if (!c.table_file.empty()) j["table"] = c.table_file;
        else j["sigma"] = c.sigma;
    }
    j["seed"] = c.seed;
    j["quad_tol"] = resolve_quad_tol(c);
    for (auto& [k, v] : extra.items()) j[k] = v;
    os << "# config: " << j.dump() << "\n";
}

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_validate_pot(const Common& c, double zmax, long long points, std::ostream& outs) {
    PotFunction pot = c.table_file.empty()
                          ? make_pot(c.sigma)
                          : [&] {
                                // Build without the validity gate: the point here
                                // is the report itself.
                                std::ifstream in(c.table_file);
                                if (!in) throw CLI::ValidationError("--table", "cannot open file");
                                std::vector<double> zs, ss;
                                std::string line;
                                while (std::getline(in, line)) {
                                    if (line.empty() || line[0] == '#') continue;
                                    std::replace(line.begin(), line.end(), ',', ' ');
                                    std::istringstream ls(line);
                                    double z, s;
                                    if (ls >> z >> s) {
                                        zs.push_back(z);
                                        ss.push_back(s);
                                    }
                                }
                                return PotFunction::custom_from_table(zs, ss, "custom:" + c.table_file);
                            }();
    ValidationOptions vo;
    vo.z_max = zmax;
    vo.points = std::size_t(points);
    const ValidationReport rep = validate_pot(pot, vo);
    outs << "check,pass,witness_z,value,detail\n";
    const auto row = [&](const char* name, const AssumptionCheck& a, const std::string& value) {
        outs << name << "," << (a.pass ? "true" : "false") << ","
             << (a.witness_z ? format_double(*a.witness_z) : "") << "," << value << ","
             << csv_field(a.detail) << "\n";
    };
    row("positive_increasing", rep.positive_increasing, "");
    row("symmetry", rep.symmetry, "");
    row("tail_bound", rep.tail_bound, "");
    row("ratio_bounded", rep.ratio_bounded,
        rep.ratio_bounded.pass ? format_double(rep.sup4) + " at z=" + format_double(rep.sup4_argmax)
                               : "");
    return rep.pass() ? 0 : 2;
}

int cmd_simulate(const Common& c, long long k, const std::string& emit, std::ostream& outs) {
    const PotFunction pot = resolve_pot(c);
    const TailFunctions tails(pot, resolve_quad_tol(c));
    const RepeatWinResult rw = repeat_win(pot, k);
    const double mid = 0.5 * tails.f_inv(2.0 * double(k));
    const bool inside = std::abs(rw.rating - mid) <= 3.0;
    if (!emit.empty()) rw.transcript.save(emit);
    outs << "sigma,k,rating,interval_lo,interval_mid,interval_hi,inside\n";
    outs << csv_field(pot.name()) << "," << k << "," << format_double(rw.rating) << ","
         << format_double(mid - 3.0) << "," << format_double(mid) << "," << format_double(mid + 3.0)
         << "," << (inside ? "true" : "false") << "\n";
    return inside ? 0 : 2;
}

int cmd_ladder(const Common& c, long long k, bool early_stop, double a_override, bool certify,
               const std::string& emit, std::ostream& outs) {
    const PotFunction pot = resolve_pot(c);
    if (!pot.threshold_A() && a_override <= 0.0) {
        throw CLI::ValidationError(
            "--sigma", "this pot function has no gap threshold A; use `simulate` "
                       "(two-player repeated wins) instead");
    }
    LadderOptions opt;
    opt.early_stop = early_stop;
    if (a_override > 0.0) opt.threshold_override = a_override;
    opt.with_transcript = !emit.empty();
    const LadderRun run = ladder(pot, k, opt);
    if (!emit.empty()) run.transcript->save(emit);
    const auto& cert = run.certificates;
    if (certify) {
        outs << "certificate,lhs,rhs,margin,pass\n";
        const auto row = [&](const char* name, double lhs, double rhs, double margin) {
            outs << name << "," << format_double(lhs) << "," << format_double(rhs) << ","
                 << format_double(margin) << "," << (margin >= 0.0 ? "true" : "false") << "\n";
        };
        const double min_gap = cert.gap_margin + run.A;
        row("gap", run.A, min_gap, cert.gap_margin);
        row("potential", 2.0 * pot(-run.A) * double(run.games_played), run.phi,
            cert.potential_margin);
        row("player_count", 0.5 * run.A * double(run.n_k - 1), run.r1, cert.player_margin);
        row("guarantee", run.guarantee, run.r1, cert.guarantee_margin);
    } else {
        outs << "sigma,k,games_played,stopped_early,r1,guarantee,n_k,players_used,player_budget,"
                "phi\n";
        outs << csv_field(pot.name()) << "," << run.k << "," << run.games_played << ","
             << (run.stopped_early ? "true" : "false") << "," << format_double(run.r1) << ","
             << format_double(run.guarantee) << "," << run.n_k << "," << run.players_used << ","
             << format_double(run.player_budget) << "," << format_double(run.phi) << "\n";
    }
    return cert.all_nonnegative() ? 0 : 2;
}

int cmd_search(const Common& c, int n, int k, bool no_symmetry, const std::string& emit,
               std::ostream& outs) {
    const PotFunction pot = resolve_pot(c);
    const TailFunctions tails(pot, resolve_quad_tol(c));
    SearchProblem p{pot, n, k, !no_symmetry};
    const SearchResult sr = solve(p);
    const CompareReport rep = compare(p, tails);
    if (!emit.empty()) sr.best_transcript.save(emit);
    outs << "sigma,n,k,best_value,nodes_expanded,pruned,repeat_win,ladder,interval_lo,interval_hi,"
            "cap,violation\n";
    outs << csv_field(pot.name()) << "," << n << "," << k << "," << format_double(sr.best_value)
         << "," << sr.nodes_expanded << "," << sr.pruned << ","
         << format_double(rep.repeat_win_value) << ","
         << (rep.ladder_value ? format_double(*rep.ladder_value) : "") << ","
         << format_double(rep.two_player_lo) << "," << format_double(rep.two_player_hi) << ","
         << format_double(rep.cap) << "," << (rep.violation() ? "true" : "false") << "\n";
    return rep.violation() ? 2 : 0;
}

int cmd_bounds(const Common& c, std::optional<double> k, std::optional<double> R,
               bool with_constants, const std::vector<double>& evals, std::ostream& outs) {
    const PotFunction pot = resolve_pot(c);
    const TailFunctions tails(pot, resolve_quad_tol(c));
    if (!evals.empty()) {
        outs << "x,f,g,f_inv,g_inv\n";
        for (double x : evals) {
            outs << format_double(x) << "," << format_double(tails.f(x)) << ","
                 << format_double(tails.g(x)) << "," << format_double(tails.f_inv(x)) << ","
                 << format_double(tails.g_inv(x)) << "\n";
        }
        return 0;
    }
    const BoundReport rep = make_bound_report(tails, k, R);
    outs << "sigma,k,R,two_player_lo,two_player_hi,ladder_lower,potential_lb,games_lb,cap";
    if (with_constants) outs << ",C1,C2,C,a";
    outs << "\n";
    outs << csv_field(rep.sigma_name) << "," << opt_field(rep.k) << "," << opt_field(rep.R) << ","
         << opt_field(rep.two_player_lo) << "," << opt_field(rep.two_player_hi) << ","
         << opt_field(rep.ladder_lower) << "," << opt_field(rep.potential_lb) << ","
         << opt_field(rep.games_lb) << "," << opt_field(rep.cap);
    if (with_constants) {
        outs << "," << format_double(rep.C1) << "," << format_double(rep.C2) << ","
             << format_double(rep.C) << "," << format_double(rep.a);
    }
    outs << "\n";
    return 0;
}

int cmd_certify_path(const Common& c, const std::string& in_path, double R, std::ostream& outs) {
    const Transcript t = Transcript::load(in_path);
    const PotFunction pot = !c.table_file.empty() ? make_pot_from_table_file(c.table_file)
                                                  : make_pot(t.sigma_name);
    const TailFunctions tails(pot, resolve_quad_tol(c));
    const Path path = transcript_to_path(t);
    const RatingState start = RatingState::origin(std::size_t(t.n));
    ordered_json j;
    try {
        const auto [result, rep] = make_upset_free(start, path, R, tails);
        j["original_len"] = rep.original_len;
        j["rewritten_len"] = rep.rewritten_len;
        j["continuous_len"] = rep.continuous_len;
        j["length_ratio"] = rep.length_ratio;
        j["c1"] = rep.c1;
        j["endpoint_error"] = rep.endpoint_error;
        j["worst_rewrite_error"] = rep.worst_rewrite_error;
        j["step1_rewrites"] = rep.step1_rewrites;
        j["step2_rewrites"] = rep.step2_rewrites;
        j["step3_deleted"] = rep.step3_deleted;
        j["upset_free"] = rep.upset_free;
        j["final_max"] = rep.final_max;
        j["edges"] = result.size();
        const bool ok = rep.upset_free && rep.endpoint_error <= 1e-7 &&
                        rep.worst_rewrite_error <= 1e-9 && rep.final_max >= R - 1e-12 &&
                        rep.rewritten_len <= rep.c1 * rep.original_len + 1e-9;
        j["certified"] = ok;
        outs << j.dump() << "\n";
        return ok ? 0 : 2;
    } catch (const PipelineCapExceeded& e) {
        j["error"] = e.what();
        j["residual_edges"] = e.residual.size();
        j["certified"] = false;
        outs << j.dump() << "\n";
        return 2;
    }
}

int cmd_table1(const Common& c, double k, double p, std::ostream& outs) {
    const double tol = resolve_quad_tol(c);
    outs << "sigma,k,n2_closed,n2_half_finv_2k,ninf_rate\n";
    for (const PotFunction& pot :
         {PotFunction::logistic(), PotFunction::algebraic(p), PotFunction::gaussian_erf()}) {
        const GrowthRates g = growth_rates(pot, k);
        const TailFunctions tails(pot, tol);
        outs << csv_field(pot.name()) << "," << format_double(k) << ","
             << format_double(g.two_player) << "," << format_double(0.5 * tails.f_inv(2.0 * k))
             << "," << format_double(g.unlimited_rate) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"rating-inflation toolkit: optimal rigged-game strategies and their certified "
                 "bounds"};
    app.require_subcommand(1);

    Common c_validate, c_sim, c_ladder, c_search, c_bounds, c_certify, c_table;

    auto* validate = app.add_subcommand("validate-pot", "check the pot-function assumptions on a grid");
    double zmax = 50.0;
    long long points = 20001;
    add_common(validate, c_validate);
    validate->add_option("--zmax", zmax, "grid half-width (>= 50)")->check(CLI::Range(50.0, 1e6));
    validate->add_option("--points", points, "grid points (>= 10000)")
        ->check(CLI::Range(10000LL, 100000000LL));

    auto* sim = app.add_subcommand("simulate", "two-player repeated wins and the growth interval");
    long long sim_k = 0;
    std::string sim_emit;
    add_common(sim, c_sim);
    sim->add_option("--n2-wins", sim_k, "number of consecutive wins")
        ->required()
        ->check(CLI::Range(0LL, 100000000LL));
    sim->add_option("--emit", sim_emit, "write the transcript JSON here");

    auto* lad = app.add_subcommand("ladder", "run the gap-threshold ladder strategy");
    long long lad_k = 0;
    bool lad_early = false, lad_certify = false;
    double lad_A = 0.0;
    std::string lad_emit;
    add_common(lad, c_ladder);
    lad->add_option("--games", lad_k, "game budget k")->required()->check(CLI::Range(0LL, 2000000000LL));
    lad->add_flag("--early-stop", lad_early, "stop once r1 exceeds the guarantee");
    lad->add_flag("--certify", lad_certify, "print the certificate inequalities with margins");
    lad->add_option("--A", lad_A, "override the gap threshold A");
    lad->add_option("--emit", lad_emit, "write the transcript JSON here");

    auto* sea = app.add_subcommand("search", "exact branch-and-bound over tiny game sequences");
    int sea_n = 2, sea_k = 0;
    bool sea_nosym = false;
    std::string sea_emit;
    add_common(sea, c_search);
    sea->add_option("-n,--players", sea_n, "player count (2..6)")->required()->check(CLI::Range(2, 6));
    sea->add_option("-k,--games", sea_k, "game count (0..12)")->required()->check(CLI::Range(0, 12));
    sea->add_flag("--no-symmetry", sea_nosym, "disable canonicalization (oracle mode)");
    sea->add_option("--emit", sea_emit, "write the best transcript JSON here");

    auto* bnd = app.add_subcommand("bounds", "evaluate the certified bounds and tail functions");
    double bnd_k = 0.0, bnd_R = 0.0;
    bool bnd_constants = false;
    std::vector<double> bnd_evals;
    add_common(bnd, c_bounds);
    auto* og = bnd->add_option("--games", bnd_k, "game-count query k");
    auto* orr = bnd->add_option("--rating", bnd_R, "target-rating query R");
    bnd->add_flag("--constants", bnd_constants, "include the derived constants as columns");
    bnd->add_option("--eval", bnd_evals, "print f,g,f_inv,g_inv at these points instead");

    auto* cer = app.add_subcommand("certify-path", "rewrite a transcript upset-free and certify it");
    std::string cer_in;
    double cer_R = 1.0;
    add_common(cer, c_certify);
    cer->add_option("--in", cer_in, "transcript JSON file")->required();
    cer->add_option("--rating", cer_R, "target rating R the path reaches")->required();

    auto* tab = app.add_subcommand("table1", "regenerate the growth table for the built-ins");
    double tab_k = 1e6, tab_p = 1.0;
    add_common(tab, c_table, false);
    tab->add_option("--k", tab_k, "game count k")->check(CLI::Range(2.0, 1e18));
    tab->add_option("--p", tab_p, "algebraic-row parameter p >= 1")->check(CLI::Range(1.0, 1e6));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*validate) {
            Output o(c_validate, out);
            write_config_header(o.stream(), "validate-pot", c_validate,
                                {{"zmax", zmax}, {"points", points}});
            return cmd_validate_pot(c_validate, zmax, points, o.stream());
        }
        if (*sim) {
            Output o(c_sim, out);
            write_config_header(o.stream(), "simulate", c_sim, {{"n2_wins", sim_k}});
            return cmd_simulate(c_sim, sim_k, sim_emit, o.stream());
        }
        if (*lad) {
            Output o(c_ladder, out);
            write_config_header(o.stream(), "ladder", c_ladder,
                                {{"games", lad_k},
                                 {"early_stop", lad_early},
                                 {"certify", lad_certify},
                                 {"A_override", lad_A}});
            return cmd_ladder(c_ladder, lad_k, lad_early, lad_A, lad_certify, lad_emit, o.stream());
        }
        if (*sea) {
            Output o(c_search, out);
            write_config_header(o.stream(), "search", c_search,
                                {{"n", sea_n}, {"k", sea_k}, {"no_symmetry", sea_nosym}});
            return cmd_search(c_search, sea_n, sea_k, sea_nosym, sea_emit, o.stream());
        }
        if (*bnd) {
            if (bnd_evals.empty() && !*og && !*orr) {
                err << "error: bounds requires --games, --rating, or --eval\n";
                return 1;
            }
            Output o(c_bounds, out);
            ordered_json extra;
            if (*og) extra["games"] = bnd_k;
            if (*orr) extra["rating"] = bnd_R;
            if (!bnd_evals.empty()) extra["eval"] = bnd_evals;
            write_config_header(o.stream(), "bounds", c_bounds, extra);
            return cmd_bounds(c_bounds, *og ? std::optional<double>(bnd_k) : std::nullopt,
                              *orr ? std::optional<double>(bnd_R) : std::nullopt, bnd_constants,
                              bnd_evals, o.stream());
        }
        if (*cer) {
            Output o(c_certify, out);
            write_config_header(o.stream(), "certify-path", c_certify,
                                {{"in", cer_in}, {"rating", cer_R}});
            return cmd_certify_path(c_certify, cer_in, cer_R, o.stream());
        }
        if (*tab) {
            Output o(c_table, out);
            write_config_header(o.stream(), "table1", c_table, {{"k", tab_k}, {"p", tab_p}},
                                /*include_sigma=*/false);
            return cmd_table1(c_table, tab_k, tab_p, o.stream());
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace eloforge
