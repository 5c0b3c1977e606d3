#include "ergolab/task.hpp"

#include "ergolab/errors.hpp"
#include "ergolab/koopman.hpp"
#include "ergolab/pentropy.hpp"
#include "ergolab/poisson.hpp"
#include "ergolab/recurrence.hpp"
#include "ergolab/spectral.hpp"

#include <cinttypes>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ergolab {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

const Json& require(const Json& j, const std::string& field) {
    if (!j.contains(field)) bad_field(field, "missing");
    return j.at(field);
}

std::int64_t get_int(const Json& j, const std::string& field) {
    const Json& v = require(j, field);
    if (!v.is_number_integer()) bad_field(field, "expected an integer");
    return v.get<std::int64_t>();
}

std::int64_t get_int_or(const Json& j, const std::string& field, std::int64_t fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number_integer()) bad_field(field, "expected an integer");
    return j.at(field).get<std::int64_t>();
}

double get_double_or(const Json& j, const std::string& field, double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number()) bad_field(field, "expected a number");
    return j.at(field).get<double>();
}

std::string get_string(const Json& j, const std::string& field) {
    const Json& v = require(j, field);
    if (!v.is_string()) bad_field(field, "expected a string");
    return v.get<std::string>();
}

Rational get_rational(const Json& j, const std::string& field) {
    const Json& v = require(j, field);
    if (v.is_string()) return parse_rational_literal(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    bad_field(field, "expected a rational literal like \"3/4\"");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape_free(const std::string& v) {
    for (const char c : v)
        if (c == ',' || c == '"' || c == '\n')
            throw std::invalid_argument("value not CSV-safe: " + v);
    return v;
}

SystemSpec parse_system_spec(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("system spec must be an object");
    const std::string kind = get_string(j, "kind");
    if (kind == "rotation") {
        if (j.contains("fibonacci")) {
            const std::int64_t k = get_int(j, "fibonacci");
            if (k < 1 || k > 1000) bad_field("fibonacci", "index out of range");
            return RotationSpec{fibonacci_convergent(static_cast<int>(k))};
        }
        return RotationSpec{get_rational(j, "angle")};
    }
    if (kind == "bernoulli") return BernoulliSpec{};
    if (kind == "baker") return BakerSpec{};
    if (kind == "torus") {
        const Json& angles = require(j, "angles");
        if (!angles.is_array() || angles.empty())
            bad_field("angles", "expected a non-empty array of rational literals");
        TorusSpec t;
        for (const auto& a : angles) {
            if (!a.is_string()) bad_field("angles", "entries must be rational strings");
            t.angles.push_back(parse_rational_literal(a.get<std::string>()));
        }
        return t;
    }
    if (kind == "rank_one")
        throw std::invalid_argument("rank_one specs are handled by the rank-one tasks");
    bad_field("kind", "unknown system kind '" + kind + "'");
}

RankOneSpec parse_rank_one_spec(const Json& j) {
    if (j.is_string()) return RankOneSpec::preset(j.get<std::string>());
    if (!j.is_object()) throw std::invalid_argument("rank-one spec must be an object or name");
    if (j.contains("preset")) return RankOneSpec::preset(get_string(j, "preset"));
    if (j.contains("cuts")) {
        const Json& cuts = require(j, "cuts");
        const Json& spacers = require(j, "spacers");
        if (!cuts.is_array() || !spacers.is_array())
            bad_field("cuts", "expected arrays for cuts and spacers");
        std::vector<std::int64_t> c;
        for (const auto& v : cuts) {
            if (!v.is_number_integer()) bad_field("cuts", "entries must be integers");
            c.push_back(v.get<std::int64_t>());
        }
        std::vector<std::vector<BigInt>> s;
        for (const auto& row : spacers) {
            if (!row.is_array()) bad_field("spacers", "expected an array of arrays");
            std::vector<BigInt> r;
            for (const auto& v : row) {
                if (v.is_number_integer()) {
                    r.emplace_back(v.get<std::int64_t>());
                } else if (v.is_string()) {
                    r.emplace_back(BigInt(v.get<std::string>()));
                } else {
                    bad_field("spacers", "entries must be integers");
                }
            }
            s.push_back(std::move(r));
        }
        return RankOneSpec::custom(std::move(c), std::move(s));
    }
    throw std::invalid_argument("rank-one spec needs 'preset' or 'cuts'+'spacers'");
}

MeasurableSet parse_set(const Json& j, SetFamily family) {
    switch (family) {
        case SetFamily::Interval:
            if (!j.is_string())
                throw std::invalid_argument("interval set literal must be a string");
            return parse_interval_set(j.get<std::string>());
        case SetFamily::Cylinder:
            if (!j.is_string())
                throw std::invalid_argument("cylinder set literal must be a string");
            return parse_cylinder_set(j.get<std::string>());
        case SetFamily::Rect: {
            if (!j.is_array())
                throw std::invalid_argument(
                    "rect set must be an array of {\"x\":\"l..r\",\"y\":\"l..r\"}");
            std::vector<DyadicRect> rects;
            for (const auto& r : j) {
                const std::string xs = get_string(r, "x");
                const std::string ys = get_string(r, "y");
                const auto cut = [](const std::string& s) {
                    const auto pos = s.find("..");
                    if (pos == std::string::npos)
                        throw std::invalid_argument("rect side needs 'l..r': '" + s + "'");
                    return std::make_pair(parse_rational_literal(s.substr(0, pos)),
                                          parse_rational_literal(s.substr(pos + 2)));
                };
                const auto [xl, xr] = cut(xs);
                const auto [yl, yr] = cut(ys);
                rects.push_back(DyadicRect{xl, xr, yl, yr});
            }
            return RectSet::from_rectangles(rects);
        }
        case SetFamily::Torus: {
            if (!j.is_array())
                throw std::invalid_argument("torus box must be an array of interval literals");
            TorusBox box;
            for (const auto& f : j) {
                if (!f.is_string())
                    throw std::invalid_argument("torus factors must be interval strings");
                box.factors.push_back(parse_interval_set(f.get<std::string>()));
            }
            return box;
        }
    }
    throw std::logic_error("unreachable");
}

LevelSet parse_level_set(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("level set must be an object");
    const int stage = static_cast<int>(get_int(j, "stage"));
    std::vector<std::pair<BigInt, BigInt>> runs;
    if (j.contains("runs")) {
        for (const auto& r : j.at("runs")) {
            if (!r.is_array() || r.size() != 2)
                bad_field("runs", "each run is a [lo, hi) pair");
            const auto edge = [](const Json& v) {
                if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
                if (v.is_string()) return BigInt(v.get<std::string>());
                throw std::invalid_argument("run bounds must be integers");
            };
            runs.emplace_back(edge(r[0]), edge(r[1]));
        }
    } else if (j.contains("levels")) {
        for (const auto& v : j.at("levels")) {
            if (!v.is_number_integer()) bad_field("levels", "entries must be integers");
            const BigInt l(v.get<std::int64_t>());
            runs.emplace_back(l, l + 1);
        }
    } else {
        throw std::invalid_argument("level set needs 'runs' or 'levels'");
    }
    return LevelSet::from_runs(stage, std::move(runs));
}

StepFunction parse_step_function(const Json& j, SetFamily family) {
    StepFunction f;
    if (!j.is_object()) throw std::invalid_argument("function spec must be an object");
    const Json& terms = require(j, "terms");
    if (!terms.is_array() || terms.empty())
        bad_field("terms", "expected a non-empty array of [coeff, set] pairs");
    for (const auto& t : terms) {
        if (!t.is_array() || t.size() != 2) bad_field("terms", "each term is [coeff, set]");
        Rational c;
        if (t[0].is_string()) {
            c = parse_rational_literal(t[0].get<std::string>());
        } else if (t[0].is_number_integer()) {
            c = Rational(t[0].get<std::int64_t>());
        } else {
            bad_field("terms", "coefficient must be a rational literal or integer");
        }
        f.terms.emplace_back(c, parse_set(t[1], family));
    }
    f.centered = j.value("center", false);
    return f;
}

namespace {

StepFunction default_function(SetFamily family) {
    // indicator of a half-mass set minus its mean
    StepFunction f;
    switch (family) {
        case SetFamily::Interval:
            f.terms.emplace_back(Rational(1),
                                 IntervalSet::interval(Rational(0), Rational(1, 2)));
            break;
        case SetFamily::Cylinder:
            f.terms.emplace_back(Rational(1), CylinderSet::cylinder({{0, false}}));
            break;
        case SetFamily::Rect:
            f.terms.emplace_back(
                Rational(1), RectSet::from_rectangles({DyadicRect{
                                 Rational(0), Rational(1, 2), Rational(0), Rational(1)}}));
            break;
        case SetFamily::Torus: {
            TorusBox box;
            box.factors.push_back(IntervalSet::interval(Rational(0), Rational(1, 2)));
            f.terms.emplace_back(Rational(1), box);
            break;
        }
    }
    return f;
}

struct ParsedSystem {
    std::optional<System> sys;
    std::optional<RankOne> eng;

    bool is_rank_one() const { return eng.has_value(); }
};

ParsedSystem parse_any(const Json& config) {
    ParsedSystem out;
    if (config.contains("system")) {
        const Json& s = config.at("system");
        if (s.is_object() && s.value("kind", "") == "rank_one") {
            out.eng.emplace(parse_rank_one_spec(s));
        } else if (s.is_string() || (s.is_object() && (s.contains("preset") || s.contains("cuts")))) {
            out.eng.emplace(parse_rank_one_spec(s));
        } else {
            out.sys.emplace(parse_system_spec(s));
        }
        return out;
    }
    if (config.contains("preset") || config.contains("cuts")) {
        out.eng.emplace(parse_rank_one_spec(config));
        return out;
    }
    throw std::invalid_argument("config needs a 'system' (or rank-one 'preset'/'cuts')");
}

std::string json_payload(Json j) { return j.dump(2) + "\n"; }

Json rational_json(const Rational& v) {
    Json j;
    j["exact"] = rational_str(v);
    j["decimal"] = to_double(v);
    return j;
}

// ---- task implementations ----

TaskResult task_stage(const Json& config) {
    ParsedSystem ps = parse_any(config);
    if (!ps.is_rank_one()) throw std::invalid_argument("'stage' needs a rank-one spec");
    const int j = static_cast<int>(get_int(config, "j"));
    if (j < 1) bad_field("j", "must be >= 1");
    const StageSummary s = ps.eng->stage(j);
    Json out;
    out["task"] = "stage";
    out["spec"] = ps.eng->spec().name();
    out["j"] = s.j;
    out["h"] = s.h.str();
    out["width"] = rational_json(s.width);
    out["total"] = rational_json(s.total);
    Json offs = Json::array();
    for (const auto& o : s.offsets) offs.push_back(o.str());
    out["offsets"] = std::move(offs);
    out["support"] = "0.." + rational_str(s.support);
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = "stage " + std::to_string(j) + ": h=" + s.h.str() +
                " total=" + rational_str(s.total);
    return r;
}

CorrelationSeries correlate_common(const Json& config, const ParsedSystem& ps,
                                   std::int64_t lo, std::int64_t hi) {
    if (ps.is_rank_one()) {
        const LevelSet a = parse_level_set(require(config, "A"));
        const LevelSet b = parse_level_set(require(config, "B"));
        std::optional<Rational> tol;
        if (config.contains("tol")) tol = get_rational(config, "tol");
        const int cap = static_cast<int>(get_int_or(config, "stage_cap", 24));
        return correlation_series(*ps.eng, a, b, lo, hi, tol, cap);
    }
    const SetFamily fam = ps.sys->family();
    const MeasurableSet a = parse_set(require(config, "A"), fam);
    const MeasurableSet b = parse_set(require(config, "B"), fam);
    return correlation_series(*ps.sys, a, b, lo, hi);
}

TaskResult task_correlate(const Json& config) {
    ParsedSystem ps = parse_any(config);
    const Json& range = require(config, "range");
    if (!range.is_array() || range.size() != 2) bad_field("range", "expected [lo, hi]");
    const std::int64_t lo = range[0].get<std::int64_t>();
    const std::int64_t hi = range[1].get<std::int64_t>();
    const CorrelationSeries series = correlate_common(config, ps, lo, hi);

    std::ostringstream csv;
    csv << "n,lo,hi,lo_decimal,hi_decimal\n";
    for (std::int64_t n = series.first; n <= series.last(); ++n) {
        const auto& v = series.at(n);
        csv << n << ',' << rational_str(v.first) << ',' << rational_str(v.second) << ','
            << format_double(to_double(v.first)) << ',' << format_double(to_double(v.second))
            << '\n';
    }
    TaskResult r;
    r.text = csv.str();
    r.format = "csv";
    r.summary = std::string("correlations ") + (series.exact ? "exact" : "enclosed") +
                ", lags " + std::to_string(lo) + ".." + std::to_string(hi);
    return r;
}

TaskResult task_cesaro(const Json& config) {
    ParsedSystem ps = parse_any(config);
    const std::int64_t n = get_int(config, "N");
    if (n < 1) bad_field("N", "must be >= 1");
    const CorrelationSeries series = correlate_common(config, ps, 1, n);
    std::optional<double> target;
    if (config.contains("target")) target = to_double(get_rational(config, "target"));
    const CesaroDiagnostics diag = cesaro_diagnostics(series, target);

    std::ostringstream csv;
    csv << "N,avg,absdev\n";
    for (std::size_t i = 0; i < diag.avg.size(); ++i)
        csv << (i + 1) << ',' << format_double(diag.avg[i]) << ','
            << format_double(diag.absdev[i]) << '\n';
    TaskResult r;
    r.text = csv.str();
    r.format = "csv";
    r.summary = "cesaro avg_" + std::to_string(n) + " = " + format_double(diag.avg.back()) +
                " (target " + format_double(diag.target) + ")";
    return r;
}

TaskResult task_fit_limit(const Json& config) {
    ParsedSystem ps = parse_any(config);
    const Json& sets = require(config, "sets");
    const Json& pairs = require(config, "pairs");
    if (!sets.is_object()) bad_field("sets", "expected an object of named sets");
    if (!pairs.is_array()) bad_field("pairs", "expected an array of [nameA, nameB]");
    std::vector<std::int64_t> basis;
    for (const auto& k : require(config, "basis")) {
        if (!k.is_number_integer()) bad_field("basis", "entries must be integers");
        basis.push_back(k.get<std::int64_t>());
    }
    std::int64_t n;
    if (config.contains("n_height_stage")) {
        if (!ps.is_rank_one()) bad_field("n_height_stage", "only valid for rank-one specs");
        const BigInt h = ps.eng->height(static_cast<int>(get_int(config, "n_height_stage")));
        if (h > std::numeric_limits<std::int64_t>::max())
            bad_field("n_height_stage", "height exceeds the supported lag range");
        n = h.convert_to<std::int64_t>();
    } else {
        n = get_int(config, "n");
    }

    WeakLimitFit fit;
    if (ps.is_rank_one()) {
        std::vector<std::pair<LevelSet, LevelSet>> p;
        for (const auto& pr : pairs) {
            if (!pr.is_array() || pr.size() != 2) bad_field("pairs", "entries are [nameA, nameB]");
            p.emplace_back(parse_level_set(require(sets, pr[0].get<std::string>())),
                           parse_level_set(require(sets, pr[1].get<std::string>())));
        }
        std::optional<Rational> tol;
        if (config.contains("tol")) tol = get_rational(config, "tol");
        fit = fit_weak_limit(*ps.eng, p, n, basis, tol,
                             static_cast<int>(get_int_or(config, "stage_cap", 24)));
    } else {
        const SetFamily fam = ps.sys->family();
        std::vector<std::pair<MeasurableSet, MeasurableSet>> p;
        for (const auto& pr : pairs) {
            if (!pr.is_array() || pr.size() != 2) bad_field("pairs", "entries are [nameA, nameB]");
            p.emplace_back(parse_set(require(sets, pr[0].get<std::string>()), fam),
                           parse_set(require(sets, pr[1].get<std::string>()), fam));
        }
        fit = fit_weak_limit(*ps.sys, p, n, basis);
    }

    Json out;
    out["task"] = "fit-limit";
    out["n"] = fit.n;
    Json coeffs;
    coeffs["theta"] = fit.coefficients[0];
    for (std::size_t t = 0; t < fit.basis.size(); ++t)
        coeffs["T^" + std::to_string(fit.basis[t])] = fit.coefficients[t + 1];
    out["coefficients"] = std::move(coeffs);
    out["residual"] = fit.residual;
    out["status"] = fit.status;
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = "fit n=" + std::to_string(fit.n) + " residual=" + format_double(fit.residual) +
                " status=" + fit.status;
    return r;
}

TaskResult task_metric(const Json& config) {
    const std::string metric = get_string(config, "metric");
    const int depth = static_cast<int>(get_int_or(config, "depth", 8));
    MetricReport rep;
    if (metric == "halmos") {
        const System left(parse_system_spec(require(require(config, "left"), "system")));
        const System right(parse_system_spec(require(require(config, "right"), "system")));
        rep = halmos_distance(left, right, depth);
    } else if (metric == "weak") {
        const auto side = [&](const std::string& name) {
            const Json& s = require(config, name);
            System sys(parse_system_spec(require(s, "system")));
            OperatorRef ref = OperatorRef::power(get_int_or(s, "power", 1));
            if (s.value("theta", false)) ref = OperatorRef::projector();
            return std::make_pair(std::move(sys), ref);
        };
        auto [ls, lref] = side("left");
        auto [rs, rref] = side("right");
        rep = weak_distance(ls, lref, rs, rref, depth);
    } else {
        bad_field("metric", "expected 'halmos' or 'weak'");
    }
    Json out;
    out["task"] = "metric";
    out["metric"] = metric;
    out["value"] = rep.value;
    out["tail_bound"] = rep.tail_bound;
    out["depth"] = rep.depth;
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = metric + " distance = " + format_double(rep.value) + " (+tail <= " +
                format_double(rep.tail_bound) + ")";
    return r;
}

TaskResult task_spectrum(const Json& config, int threads) {
    ParsedSystem ps = parse_any(config);
    if (ps.is_rank_one())
        throw std::invalid_argument("'spectrum' runs on the probability systems");
    const SetFamily fam = ps.sys->family();
    const StepFunction f = config.contains("f") ? parse_step_function(config.at("f"), fam)
                                                : default_function(fam);
    const int lags = static_cast<int>(get_int_or(config, "lags", 400));
    const int grid = static_cast<int>(get_int_or(config, "grid", 4096));
    const Autocovariance ac = autocovariance(*ps.sys, f, lags);
    const std::vector<double> rho = fejer_density(ac, grid, threads);

    std::ostringstream density;
    density << "theta,rho\n";
    for (int m = 0; m < grid; ++m) {
        const double theta = 2.0 * 3.14159265358979323846 * m / grid;
        density << format_double(theta) << ',' << format_double(rho[m]) << '\n';
    }
    std::ostringstream autoc;
    autoc << "lag,sigma,sigma_decimal\n";
    for (std::size_t d = 0; d < ac.sigma.size(); ++d)
        autoc << d << ',' << rational_str(ac.sigma[d]) << ','
              << format_double(to_double(ac.sigma[d])) << '\n';

    double mean = 0;
    for (const double v : rho) mean += v;
    mean /= grid;

    TaskResult r;
    r.text = density.str();
    r.format = "csv";
    r.extra.emplace_back(".autocov.csv", autoc.str());
    r.summary = "sigma(0)=" + format_double(to_double(ac.sigma[0])) +
                ", grid mean=" + format_double(mean);
    return r;
}

TaskResult task_atoms(const Json& config, int threads) {
    ParsedSystem ps = parse_any(config);
    if (ps.is_rank_one())
        throw std::invalid_argument("'atoms' runs on the probability systems");
    const SetFamily fam = ps.sys->family();
    const StepFunction f = config.contains("f") ? parse_step_function(config.at("f"), fam)
                                                : default_function(fam);
    const int lags = static_cast<int>(get_int_or(config, "lags", 2000));
    const int grid = static_cast<int>(get_int_or(config, "grid", 4096));
    const double threshold = get_double_or(config, "threshold", 0.005);
    const int radius = static_cast<int>(get_int_or(config, "radius", 0));
    const Autocovariance ac = autocovariance(*ps.sys, f, lags);
    const EigenScanResult scan = eigen_scan(ac, grid, threshold, radius, threads);

    Json out;
    out["task"] = "atoms";
    Json atoms = Json::array();
    for (const auto& a : scan.atoms) {
        Json item;
        item["angle"] = a.angle;
        item["mass"] = a.mass;
        atoms.push_back(std::move(item));
    }
    out["atoms"] = std::move(atoms);
    out["closed"] = scan.closed;
    out["threshold"] = scan.threshold;
    out["merge_radius"] = scan.merge_radius;
    out["closure_tol"] = scan.closure_tol;
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = std::to_string(scan.atoms.size()) + " atoms, closed=" +
                (scan.closed ? "true" : "false");
    return r;
}

TaskResult task_entropy(const Json& config) {
    ParsedSystem ps = parse_any(config);
    const int j_max = static_cast<int>(get_int(config, "j_max"));
    std::vector<std::int64_t> lengths;
    if (config.contains("lengths")) {
        for (const auto& v : config.at("lengths")) lengths.push_back(v.get<std::int64_t>());
    } else if (config.contains("L")) {
        const Json& l = config.at("L");
        if (l.is_string() && l.get<std::string>() == "j") {
            for (int j = 1; j <= j_max; ++j) lengths.push_back(j);
        } else if (l.is_number_integer()) {
            lengths.assign(static_cast<std::size_t>(j_max), l.get<std::int64_t>());
        } else {
            bad_field("L", "expected an integer or \"j\"");
        }
    } else {
        bad_field("L", "missing (or provide 'lengths')");
    }
    const std::size_t cap = static_cast<std::size_t>(get_int_or(config, "cell_cap", 1 << 20));

    std::vector<EntropyProfilePoint> profile;
    if (ps.is_rank_one()) {
        std::vector<LevelSet> cells;
        for (const auto& c : require(config, "partition")) cells.push_back(parse_level_set(c));
        profile = entropy_profile_rank_one(*ps.eng, cells, j_max, lengths, cap,
                                           static_cast<int>(get_int_or(config, "stage_cap", 24)));
    } else {
        const SetFamily fam = ps.sys->family();
        std::vector<MeasurableSet> cells;
        if (config.contains("partition")) {
            for (const auto& c : config.at("partition")) cells.push_back(parse_set(c, fam));
        } else {
            const StepFunction f = default_function(fam);
            cells.push_back(f.terms[0].second);
            cells.push_back(complement(f.terms[0].second));
        }
        Partition xi = Partition::from_cells(std::move(cells));
        xi.validate(Rational(1));
        profile = entropy_profile(*ps.sys, xi, j_max, lengths, cap);
    }

    std::ostringstream csv;
    csv << "j,L,h_lo,h_hi\n";
    for (const auto& p : profile)
        csv << p.j << ',' << p.big_l << ',' << format_double(p.h_lo) << ','
            << format_double(p.h_hi) << '\n';
    TaskResult r;
    r.text = csv.str();
    r.format = "csv";
    r.summary = "entropy profile to j=" + std::to_string(j_max) +
                ", limsup=" + format_double(profile_limsup(profile));
    return r;
}

Point parse_point(const Json& j, const System& sys) {
    if (j.is_string()) return Point(parse_rational_literal(j.get<std::string>()));
    if (j.is_object() && j.contains("seed"))
        return sys.seeded_point(j.at("seed").get<std::uint64_t>());
    if (j.is_array()) {
        std::vector<Rational> v;
        for (const auto& c : j) v.push_back(parse_rational_literal(c.get<std::string>()));
        return Point(std::move(v));
    }
    throw std::invalid_argument("point must be a rational string, coordinate array, or {seed}");
}

TaskResult task_recur(const Json& config) {
    const std::string mode = config.value("mode", "birkhoff");
    ParsedSystem ps = parse_any(config);
    TaskResult r;
    r.format = "csv";
    if (mode == "birkhoff") {
        if (ps.is_rank_one()) throw std::invalid_argument("birkhoff mode needs an exact system");
        const SetFamily fam = ps.sys->family();
        const MeasurableSet a = parse_set(require(config, "A"), fam);
        const Point x = parse_point(require(config, "x"), *ps.sys);
        const std::int64_t n = get_int(config, "N");
        const BirkhoffReport rep = birkhoff_average(*ps.sys, a, x, n);
        std::ostringstream csv;
        csv << "i,visit,average,average_decimal\n";
        for (std::size_t i = 0; i < rep.visits.size(); ++i)
            csv << (i + 1) << ',' << (rep.visits[i] ? 1 : 0) << ','
                << rational_str(rep.averages[i]) << ','
                << format_double(to_double(rep.averages[i])) << '\n';
        r.text = csv.str();
        r.summary = "birkhoff average = " + rational_str(rep.final_average);
        return r;
    }
    if (mode == "vn") {
        if (ps.is_rank_one()) throw std::invalid_argument("vn mode needs an exact system");
        const SetFamily fam = ps.sys->family();
        const StepFunction f = config.contains("f") ? parse_step_function(config.at("f"), fam)
                                                    : default_function(fam);
        const std::int64_t n = get_int(config, "N");
        if (n < 1) bad_field("N", "must be >= 1");
        const Autocovariance ac = autocovariance(*ps.sys, f, static_cast<int>(n) - 1);
        std::ostringstream csv;
        csv << "N,vn\n";
        for (int t = 1; t <= n; ++t)
            csv << t << ',' << format_double(vn_norm(ac, t)) << '\n';
        r.text = csv.str();
        r.summary = "vn(" + std::to_string(n) + ") = " +
                    format_double(vn_norm(ac, static_cast<int>(n)));
        return r;
    }
    if (mode == "multirec") {
        const std::int64_t n = get_int(config, "N");
        MultiRecReport rep;
        if (ps.is_rank_one()) {
            std::vector<LevelSet> sets;
            for (const auto& s : require(config, "sets")) sets.push_back(parse_level_set(s));
            rep = multirec_rank_one(*ps.eng, sets, n,
                                    static_cast<int>(get_int_or(config, "stage_cap", 24)));
        } else {
            const SetFamily fam = ps.sys->family();
            std::vector<MeasurableSet> sets;
            for (const auto& s : require(config, "sets")) sets.push_back(parse_set(s, fam));
            rep = multirec(*ps.sys, sets, n);
        }
        std::ostringstream csv;
        csv << "i,lo,hi,avg\n";
        for (std::size_t i = 0; i < rep.terms.size(); ++i)
            csv << (i + 1) << ',' << rational_str(rep.terms[i].first) << ','
                << rational_str(rep.terms[i].second) << ',' << format_double(rep.averages[i])
                << '\n';
        r.text = csv.str();
        r.summary = "multirec avg_" + std::to_string(n) + " = " +
                    format_double(rep.averages.back());
        return r;
    }
    bad_field("mode", "expected 'birkhoff', 'vn', or 'multirec'");
}

TaskResult task_roth(const Json& config) {
    ParsedSystem ps = parse_any(config);
    if (ps.is_rank_one()) throw std::invalid_argument("'roth' runs on the exact systems");
    const SetFamily fam = ps.sys->family();
    const MeasurableSet a = parse_set(require(config, "A"), fam);
    const std::int64_t i_max = get_int(config, "i_max");
    const RothReport rep = roth_witness(*ps.sys, a, i_max);
    Json out;
    out["task"] = "roth";
    out["found"] = rep.found;
    if (rep.found) {
        out["i_min"] = rep.witness_i;
        out["witness"] = rational_json(rep.witness_measure);
    }
    Json table = Json::array();
    for (std::size_t i = 0; i < rep.table.size(); ++i) {
        Json row;
        row["i"] = i + 1;
        row["pair"] = rational_str(rep.table[i].first);
        row["triple"] = rational_str(rep.table[i].second);
        table.push_back(std::move(row));
    }
    out["table"] = std::move(table);
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = rep.found ? ("witness i=" + std::to_string(rep.witness_i) + " measure " +
                             rational_str(rep.witness_measure))
                          : "no witness within range";
    return r;
}

TaskResult task_cocycle(const Json& config) {
    ParsedSystem ps = parse_any(config);
    if (ps.is_rank_one()) throw std::invalid_argument("'cocycle' runs on the exact systems");
    const SetFamily fam = ps.sys->family();
    const StepFunction f = parse_step_function(require(config, "f"), fam);
    const Point x = parse_point(require(config, "x"), *ps.sys);
    const std::int64_t n_floor = get_int_or(config, "n_floor", 10);
    const std::int64_t budget = get_int_or(config, "budget", 1000000);
    const auto res = cocycle_first_zero(*ps.sys, f, x, n_floor, budget);
    Json out;
    out["task"] = "cocycle";
    out["found"] = res.has_value();
    if (res) out["n"] = *res;
    out["n_floor"] = n_floor;
    out["budget"] = budget;
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = res ? ("first zero at n=" + std::to_string(*res))
                    : "no zero within budget";
    return r;
}

std::pair<RankOne, int> parse_window(const Json& config) {
    const Json& w = require(config, "window");
    RankOneSpec spec = parse_rank_one_spec(w);
    const int stage = static_cast<int>(get_int(w, "stage"));
    if (stage < 1) bad_field("stage", "must be >= 1");
    return {RankOne(std::move(spec)), stage};
}

TaskResult task_poisson_pmf(const Json& config, std::uint64_t seed) {
    auto [eng, stage] = parse_window(config);
    const LevelSet a = parse_level_set(require(config, "A"));
    const int batches = static_cast<int>(get_int_or(config, "batches", 4000));
    const PmfReport rep = count_distribution(eng, stage, a, batches, seed);
    Json out;
    out["task"] = "poisson-pmf";
    out["lambda"] = rep.lambda;
    out["batches"] = rep.batches;
    out["seed"] = rep.seed;
    Json rows = Json::array();
    for (const auto& row : rep.rows) {
        Json r;
        r["k"] = row.k;
        r["empirical"] = row.empirical;
        r["reference"] = row.reference;
        r["sigma"] = row.sigma;
        rows.push_back(std::move(r));
    }
    out["rows"] = std::move(rows);
    out["chi_square"] = rep.chi_square;
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = "pmf over " + std::to_string(batches) + " batches, chi^2=" +
                format_double(rep.chi_square);
    return r;
}

TaskResult task_poisson_indep(const Json& config, std::uint64_t seed) {
    auto [eng, stage] = parse_window(config);
    const LevelSet a = parse_level_set(require(config, "A"));
    const LevelSet b = parse_level_set(require(config, "B"));
    const std::int64_t shift = get_int_or(config, "shift", 0);
    const int batches = static_cast<int>(get_int_or(config, "batches", 4000));
    const IndependenceReport rep = independence_check(eng, stage, a, b, shift, batches, seed);
    Json out;
    out["task"] = "poisson-indep";
    Json cells = Json::array();
    for (const auto& c : rep.cells) {
        Json cj;
        cj["ka"] = c.ka;
        cj["kb"] = c.kb;
        cj["joint"] = c.joint;
        cj["product"] = c.product;
        cj["gap"] = c.gap;
        cj["sigma"] = c.sigma;
        cj["pass"] = c.pass;
        cells.push_back(std::move(cj));
    }
    out["cells"] = std::move(cells);
    out["pass"] = rep.pass;
    out["count_correlation"] = rep.count_correlation;
    out["translate_disjoint"] = rep.translate_disjoint;
    out["batches"] = rep.batches;
    out["seed"] = rep.seed;
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = std::string("independence ") + (rep.pass ? "pass (all nine cells)" : "FAIL") +
                ", count correlation=" + format_double(rep.count_correlation);
    return r;
}

TaskResult task_poisson_entropy(const Json& config, std::uint64_t seed) {
    auto [eng, stage] = parse_window(config);
    const LevelSet a = parse_level_set(require(config, "A"));
    const int j = static_cast<int>(get_int(config, "j"));
    const std::int64_t big_l = get_int(config, "L");
    const int batches = static_cast<int>(get_int_or(config, "batches", 4000));
    const SuspensionEntropyReport rep =
        suspension_progression_entropy(eng, stage, a, j, big_l, batches, seed);
    Json out;
    out["task"] = "poisson-entropy";
    out["empirical_h"] = rep.empirical_h;
    out["reference_h"] = rep.reference_h;
    Json marg = Json::array();
    for (const double m : rep.marginal_h) marg.push_back(m);
    out["marginal_h"] = std::move(marg);
    out["batches"] = rep.batches;
    out["seed"] = rep.seed;
    TaskResult r;
    r.text = json_payload(out);
    r.format = "json";
    r.summary = "suspension entropy " + format_double(rep.empirical_h) + " vs reference " +
                format_double(rep.reference_h);
    return r;
}

} // namespace

TaskResult run_task(const Json& config, std::optional<std::uint64_t> seed, int threads) {
    if (!config.is_object()) throw std::invalid_argument("config must be a JSON object");
    const std::string task = get_string(config, "task");
    std::uint64_t use_seed = 0;
    if (config.contains("seed")) use_seed = config.at("seed").get<std::uint64_t>();
    if (seed) use_seed = *seed;

    if (task == "stage") return task_stage(config);
    if (task == "correlate") return task_correlate(config);
    if (task == "cesaro") return task_cesaro(config);
    if (task == "fit-limit") return task_fit_limit(config);
    if (task == "metric") return task_metric(config);
    if (task == "spectrum") return task_spectrum(config, threads);
    if (task == "atoms") return task_atoms(config, threads);
    if (task == "entropy") return task_entropy(config);
    if (task == "recur") return task_recur(config);
    if (task == "roth") return task_roth(config);
    if (task == "cocycle") return task_cocycle(config);
    if (task == "poisson-pmf") return task_poisson_pmf(config, use_seed);
    if (task == "poisson-indep") return task_poisson_indep(config, use_seed);
    if (task == "poisson-entropy") return task_poisson_entropy(config, use_seed);
    bad_field("task", "unknown task kind '" + task + "'");
}

} // namespace ergolab
