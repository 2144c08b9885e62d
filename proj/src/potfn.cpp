#include "eloforge/potfn.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "eloforge/numeric.hpp"

namespace eloforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic_eval(double z) {
    if (z >= 0.0) {
        const double a = std::exp(-z);
        return 1.0 / (1.0 + a);
    }
    const double a = std::exp(z);
    return a / (1.0 + a);
}

double logistic_log(double z) {
    // ln sigma(z) = -log(1 + e^{-z})
    if (z > 0.0) return -std::log1p(std::exp(-z));
    return z - std::log1p(std::exp(z));
}

// Standard normal upper tail in log space. erfc covers the easy range; the
// asymptotic Mills series takes over where erfc underflows.
double log_gauss_tail(double t) {
    if (t <= 20.0) return std::log(0.5 * std::erfc(t / std::sqrt(2.0)));
    const double t2 = t * t;
    double series = 1.0, term = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) / t2;
        series += term;
        if (std::abs(term) < 1e-17 * series) break;
    }
    return -0.5 * t2 - std::log(t) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

double erf_eval(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double erf_log(double z) {
    if (z < 0.0) return log_gauss_tail(-z);
    // ln(1 - Q(z)); Q(z) <= 1/2 here
    return std::log1p(-std::exp(log_gauss_tail(z)));
}

// Algebraic family, written so the left tail never cancels:
// for t = |z|, w = (1 + t^p)^{1/p}, sigma(-t) = (w - t) / (2w).
struct AlgParts {
    double w;    // (1 + t^p)^{1/p}
    double diff; // w - t, computed without cancellation
};

AlgParts alg_parts(double t, double p) {
    if (t < 1.0) {
        const double w = std::exp(std::log1p(std::pow(t, p)) / p);
        return {w, w - t};
    }
    const double u = std::log1p(std::pow(t, -p)) / p;
    const double w = t * std::exp(u);
    return {w, t * std::expm1(u)};
}

double alg_eval(double z, double p) {
    const double t = std::abs(z);
    const AlgParts ap = alg_parts(t, p);
    if (z < 0.0) return ap.diff / (2.0 * ap.w);
    return (ap.w + t) / (2.0 * ap.w);
}

double alg_log(double z, double p) {
    const double t = std::abs(z);
    const AlgParts ap = alg_parts(t, p);
    if (z < 0.0) return std::log(ap.diff) - std::log(2.0 * ap.w);
    return std::log(ap.w + t) - std::log(2.0 * ap.w);
}

}  // namespace

struct PotFunction::Table {
    std::vector<double> z;
    std::vector<double> s;
    double lam_left = 0.0;  // log-slope of the left tail extension
    double lam_right = 0.0; // log-slope of 1-sigma on the right

    double interp(double x) const {
        if (x <= z.front()) {
            return s.front() * std::exp(lam_left * (x - z.front()));
        }
        if (x >= z.back()) {
            return 1.0 - (1.0 - s.back()) * std::exp(-lam_right * (x - z.back()));
        }
        const auto it = std::upper_bound(z.begin(), z.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - z.begin()) - 1;
        const double w = (x - z[i]) / (z[i + 1] - z[i]);
        return s[i] + w * (s[i + 1] - s[i]);
    }
};

double PotFunction::eval(double z) const {
    switch (kind_) {
        case PotKind::Logistic: return logistic_eval(z);
        case PotKind::Algebraic: return alg_eval(z, p_);
        case PotKind::GaussianErf: return erf_eval(z);
        case PotKind::Custom: return table_->interp(z);
    }
    return 0.0;
}

double PotFunction::log_eval(double z) const {
    switch (kind_) {
        case PotKind::Logistic: return logistic_log(z);
        case PotKind::Algebraic: return alg_log(z, p_);
        case PotKind::GaussianErf: return erf_log(z);
        case PotKind::Custom: return std::log(table_->interp(z));
    }
    return -kInf;
}

PotFunction PotFunction::logistic() {
    PotFunction s;
    s.kind_ = PotKind::Logistic;
    s.name_ = "logistic";
    s.compute_cached_constants();
    return s;
}

PotFunction PotFunction::algebraic(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("algebraic pot function requires p >= 1");
    PotFunction s;
    s.kind_ = PotKind::Algebraic;
    s.p_ = p;
    std::ostringstream os;
    os << "alg:p=" << p;
    s.name_ = os.str();
    s.compute_cached_constants();
    return s;
}

PotFunction PotFunction::gaussian_erf() {
    PotFunction s;
    s.kind_ = PotKind::GaussianErf;
    s.name_ = "erf";
    s.compute_cached_constants();
    return s;
}

PotFunction PotFunction::custom_from_table(std::vector<double> z, std::vector<double> s,
                                           std::string name) {
    if (z.size() != s.size() || z.size() < 2) {
        throw std::invalid_argument("custom pot table needs >= 2 rows of equal length");
    }
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        if (!(z[i] < z[i + 1])) {
            throw std::invalid_argument("custom pot table: z values must strictly increase");
        }
    }
    auto tab = std::make_shared<Table>();
    tab->z = std::move(z);
    tab->s = std::move(s);
    const auto& zz = tab->z;
    const auto& ss = tab->s;
    const std::size_t m = zz.size();
    tab->lam_left = (std::log(ss[1]) - std::log(ss[0])) / (zz[1] - zz[0]);
    tab->lam_right = (std::log1p(-ss[m - 2]) - std::log1p(-ss[m - 1])) / (zz[m - 1] - zz[m - 2]);
    PotFunction p;
    p.kind_ = PotKind::Custom;
    p.table_ = std::move(tab);
    p.name_ = std::move(name);
    p.compute_cached_constants();
    return p;
}

std::optional<double> compute_A(const PotFunction& sigma) {
    const auto h_log = [&](double z) { return sigma.log_eval(-z) + 2.0 * std::log(z); };
    // Coarse log-spaced grid over (0, 200].
    constexpr int kGrid = 4000;
    const double lo = 1e-3, hi = 200.0;
    const double step = std::log(hi / lo) / (kGrid - 1);
    double best = -kInf, best_z = lo;
    double max_below_100 = -kInf;
    int best_i = 0;
    std::vector<double> zs(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        const double z = lo * std::exp(i * step);
        zs[i] = z;
        const double v = h_log(z);
        if (v > best) { best = v; best_z = z; best_i = i; }
        if (z <= 100.0) max_below_100 = std::max(max_below_100, v);
    }
    // Growth probe: a value at the boundary beating everything below 100
    // means sigma(-z) z^2 does not decay, so no maximizer exists.
    if (h_log(200.0) >= max_below_100) return std::nullopt;
    const double bl = zs[std::max(best_i - 1, 0)];
    const double bh = zs[std::min(best_i + 1, kGrid - 1)];
    const double a = num::golden_max(h_log, bl, bh, 1e-13);
    (void)best_z;
    return a;
}

void PotFunction::compute_cached_constants() {
    // Condition-4 supremum over [0, 100], evaluated in log space so deep
    // tails cannot produce 0/0.
    constexpr int kN = 200001;
    double best = -kInf, best_z = 0.0;
    for (int i = 0; i < kN; ++i) {
        const double z = 100.0 * i / (kN - 1);
        const double ls = log_eval(-z);
        const double shift = std::exp(ls); // sigma(-z), 0 in the far tail is fine
        const double v = ls - log_eval(-z - 2.0 * shift);
        if (std::isfinite(v) && v > best) { best = v; best_z = z; }
    }
    sup4_ = std::exp(best);
    sup4_argmax_ = best_z;
    A_ = eloforge::compute_A(*this);
    if (A_) c1_ = std::cbrt(eval(-*A_) * *A_ * *A_);
    C2_ = 6.0 + 4.0 * sup4_ + 1.0 / eval(-1.0);
}

ValidationReport validate_pot(const PotFunction& sigma, const ValidationOptions& opt) {
    ValidationReport rep;
    const std::size_t n = std::max<std::size_t>(opt.points, 3);
    const double Z = opt.z_max;
    auto grid_z = [&](std::size_t i) { return -Z + 2.0 * Z * double(i) / double(n - 1); };

    // Assumption 1: positive everywhere, strictly increasing. Positivity and
    // the left half run in log space; the right half is certified through the
    // complement 1 - sigma(z) = sigma(-z), which assumption 2 ties back.
    rep.positive_increasing.pass = true;
    for (std::size_t i = 0; i < n && rep.positive_increasing.pass; ++i) {
        const double z = grid_z(i);
        const double lv = sigma.log_eval(z);
        if (!std::isfinite(lv) || !(sigma.eval(z) >= 0.0) || sigma.eval(z) > 1.0) {
            rep.positive_increasing = {false, z, "sigma not in (0,1) or not positive"};
        }
    }
    for (std::size_t i = 0; i + 1 < n && rep.positive_increasing.pass; ++i) {
        const double z0 = grid_z(i), z1 = grid_z(i + 1);
        const bool direct = sigma.log_eval(z1) > sigma.log_eval(z0);
        const bool compl_side = sigma.log_eval(-z1) < sigma.log_eval(-z0);
        if (!direct && !compl_side) {
            rep.positive_increasing = {false, z0, "sigma not strictly increasing"};
        }
    }

    // Assumption 2: sigma(z) + sigma(-z) = 1.
    rep.symmetry.pass = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = grid_z(i);
        const double err = std::abs(sigma.eval(z) + sigma.eval(-z) - 1.0);
        if (!(err <= opt.symmetry_tol)) {
            rep.symmetry = {false, z, "sigma(z)+sigma(-z) != 1"};
            break;
        }
    }

    // Assumption 3: sigma(2 - 2z) < 1/z for z > 0.
    rep.tail_bound.pass = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = grid_z(i);
        if (z <= 0.0) continue;
        if (!(sigma.eval(2.0 - 2.0 * z) < 1.0 / z)) {
            rep.tail_bound = {false, z, "sigma(2-2z) >= 1/z"};
            break;
        }
    }

    // Assumption 4: finite sampled supremum of sigma(-z)/sigma(-z-2 sigma(-z)).
    rep.ratio_bounded.pass = true;
    double best = -kInf, best_z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 100.0 * double(i) / double(n - 1);
        const double ls = sigma.log_eval(-z);
        const double v = ls - sigma.log_eval(-z - 2.0 * std::exp(ls));
        if (!std::isfinite(v)) {
            rep.ratio_bounded = {false, z, "condition-4 ratio not finite"};
            break;
        }
        if (v > best) { best = v; best_z = z; }
    }
    if (rep.ratio_bounded.pass) {
        rep.sup4 = std::exp(best);
        rep.sup4_argmax = best_z;
        rep.sup4_certified = rep.sup4 * 1.01;
    }
    return rep;
}

PotFunction make_pot(PotKind kind, double p) {
    switch (kind) {
        case PotKind::Logistic: return PotFunction::logistic();
        case PotKind::Algebraic: return PotFunction::algebraic(p);
        case PotKind::GaussianErf: return PotFunction::gaussian_erf();
        case PotKind::Custom:
            throw std::invalid_argument("custom pot functions are built from a table file");
    }
    throw std::invalid_argument("unknown pot kind");
}

PotFunction make_pot(std::string_view spec) {
    if (spec == "logistic") return PotFunction::logistic();
    if (spec == "erf") return PotFunction::gaussian_erf();
    if (spec.rfind("alg:p=", 0) == 0) {
        const std::string num(spec.substr(6));
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(num, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("unparsable algebraic parameter in '" + std::string(spec) + "'");
        }
        if (used != num.size()) {
            throw std::invalid_argument("unparsable algebraic parameter in '" + std::string(spec) + "'");
        }
        return PotFunction::algebraic(p);
    }
    throw std::invalid_argument("unknown pot function '" + std::string(spec) +
                                "' (expected logistic, erf, alg:p=<real>, or a table file)");
}

PotFunction make_pot_from_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open pot table file: " + path);
    std::vector<double> zs, ss;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double z, s;
        if (!(ls >> z >> s)) {
            throw std::invalid_argument("pot table line " + std::to_string(lineno) +
                                        ": expected 'z,sigma'");
        }
        zs.push_back(z);
        ss.push_back(s);
    }
    PotFunction pot = PotFunction::custom_from_table(std::move(zs), std::move(ss), "custom:" + path);
    const ValidationReport rep = validate_pot(pot);
    if (!rep.pass()) {
        std::string why = "custom pot function fails validation:";
        for (const auto* c : {&rep.positive_increasing, &rep.symmetry, &rep.tail_bound,
                              &rep.ratio_bounded}) {
            if (!c->pass) {
                why += " " + c->detail;
                if (c->witness_z) why += " at z=" + std::to_string(*c->witness_z) + ";";
            }
        }
        throw std::invalid_argument(why);
    }
    return pot;
}

}  // namespace eloforge
