#include "ergolab/recurrence.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

BirkhoffReport birkhoff_average(const System& sys, const MeasurableSet& a, const Point& x,
                                std::int64_t n) {
    if (n < 1) throw std::invalid_argument("birkhoff average needs n >= 1");
    BirkhoffReport rep;
    rep.visits.reserve(static_cast<std::size_t>(n));
    rep.averages.reserve(static_cast<std::size_t>(n));
    Point cur = x;
    BigInt hits = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        cur = sys.orbit_point(cur, 1);
        const bool in = sys.point_in(cur, a);
        if (in) ++hits;
        rep.visits.push_back(in);
        rep.averages.emplace_back(hits, BigInt(i));
    }
    rep.final_average = rep.averages.back();
    return rep;
}

double vn_norm(const Autocovariance& ac, int n) {
    if (n < 1) throw std::invalid_argument("vn norm needs n >= 1");
    if (ac.max_lag() < n - 1)
        throw std::invalid_argument("autocovariance too short for requested n");
    Rational sum = Rational(n) * ac.sigma[0];
    for (int d = 1; d < n; ++d)
        sum += Rational(2 * (n - d)) * ac.sigma[static_cast<std::size_t>(d)];
    if (sum < 0) sum = 0; // exact value is a squared norm; guard degenerate input
    return std::sqrt(to_double(sum)) / static_cast<double>(n);
}

MultiRecReport multirec(const System& sys, const std::vector<MeasurableSet>& sets,
                        std::int64_t n) {
    if (sets.size() < 2) throw std::invalid_argument("multirec needs at least two sets");
    if (n < 1) throw std::invalid_argument("multirec needs n >= 1");
    MultiRecReport rep;
    rep.exact = true;
    double running = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        MeasurableSet meet = sets[0];
        for (std::size_t s = 1; s < sets.size(); ++s) {
            const MeasurableSet moved = sys.image(sets[s], static_cast<std::int64_t>(s) * i);
            meet = apply_op(meet, moved, SetOp::Intersect);
        }
        const Rational m = measure(meet);
        rep.terms.emplace_back(m, m);
        running += to_double(m);
        rep.averages.push_back(running / static_cast<double>(i));
    }
    return rep;
}

MultiRecReport multirec_rank_one(const RankOne& eng, const std::vector<LevelSet>& sets,
                                 std::int64_t n, int stage_cap) {
    if (sets.size() < 2) throw std::invalid_argument("multirec needs at least two sets");
    if (n < 1) throw std::invalid_argument("multirec needs n >= 1");
    int base = sets[0].stage;
    for (const auto& s : sets) base = std::max(base, s.stage);
    const std::int64_t k = static_cast<std::int64_t>(sets.size()) - 1;

    MultiRecReport rep;
    rep.exact = true;
    double running = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        const BigInt max_shift = BigInt(k) * i;
        // deepen until the potentially unresolved top slab is small
        int stage_j = base;
        Rational lo(0), hi(0);
        bool done = false;
        while (!done) {
            if (stage_j > stage_cap)
                throw ResourceError("multirec stage cap reached", to_double(lo), to_double(hi));
            const BigInt h = eng.height(stage_j);
            if (Rational(max_shift) * eng.width(stage_j) <=
                    eng.mass(stage_j) * pow2(-30) ||
                stage_j == stage_cap) {
                LevelSet meet = eng.refine(sets[0], stage_j);
                const LevelSet a0 = meet;
                for (std::size_t s = 1; s < sets.size(); ++s) {
                    LevelSet moved = eng.refine(sets[s], stage_j)
                                         .shifted(-BigInt(static_cast<std::int64_t>(s)) * i, h);
                    meet = meet.intersect(moved);
                }
                lo = Rational(meet.count()) * eng.width(stage_j);
                // levels of A_0 whose largest shift leaves the tower
                const BigInt slab_lo = max_shift < h ? h - max_shift : BigInt(0);
                LevelSet top = a0.intersect(LevelSet::from_runs(stage_j, {{slab_lo, h}}));
                hi = lo + Rational(top.count()) * eng.width(stage_j);
                const Rational width = hi - lo;
                if (width <= eng.mass(stage_j) * pow2(-30) || stage_j == stage_cap) {
                    if (width > 0) rep.exact = false;
                    done = true;
                    break;
                }
            }
            ++stage_j;
        }
        rep.terms.emplace_back(lo, hi);
        running += to_double((lo + hi) / 2);
        rep.averages.push_back(running / static_cast<double>(i));
    }
    return rep;
}

RothReport roth_witness(const System& sys, const MeasurableSet& a, std::int64_t i_max) {
    if (i_max < 1) throw std::invalid_argument("roth scan needs i_max >= 1");
    RothReport rep;
    for (std::int64_t i = 1; i <= i_max; ++i) {
        const MeasurableSet ta = sys.image(a, i);
        const MeasurableSet t2a = sys.image(a, 2 * i);
        const MeasurableSet both = apply_op(a, ta, SetOp::Intersect);
        const Rational pair_m = measure(both);
        const Rational triple_m = measure(apply_op(both, t2a, SetOp::Intersect));
        rep.table.emplace_back(pair_m, triple_m);
        if (!rep.found && triple_m > 0) {
            rep.found = true;
            rep.witness_i = i;
            rep.witness_measure = triple_m;
        }
    }
    return rep;
}

namespace {

void validate_cocycle_function(const StepFunction& f) {
    if (f.terms.empty()) throw std::invalid_argument("cocycle function has no terms");
    for (const auto& [c, s] : f.terms) {
        if (denominator(c) != 1)
            throw std::invalid_argument("cocycle function must be integer-valued");
    }
    for (std::size_t i = 0; i < f.terms.size(); ++i)
        for (std::size_t j = i + 1; j < f.terms.size(); ++j)
            if (measure(apply_op(f.terms[i].second, f.terms[j].second, SetOp::Intersect)) != 0)
                throw std::invalid_argument("cocycle function pieces must be disjoint");
    if (f.mean_raw() != 0)
        throw std::domain_error("cocycle function must have zero mean, got " +
                                rational_str(f.mean_raw()));
}

// Rotation fast path: positions as integers over a common denominator,
// value lookup over sorted scaled breakpoints.
std::optional<std::int64_t> first_zero_rotation(const Rational& angle, const StepFunction& f,
                                                const Rational& x0, std::int64_t n_floor,
                                                std::int64_t budget) {
    BigInt den = lcm(denominator(x0), denominator(angle));
    struct Seg {
        BigInt lo, hi;
        BigInt coeff;
    };
    std::vector<Seg> segs;
    for (const auto& [c, s] : f.terms) {
        for (const auto& p : std::get<IntervalSet>(s).pieces()) {
            den = lcm(den, denominator(p.first));
            den = lcm(den, denominator(p.second));
        }
    }
    for (const auto& [c, s] : f.terms) {
        for (const auto& p : std::get<IntervalSet>(s).pieces()) {
            Seg seg;
            seg.lo = numerator(p.first) * (den / denominator(p.first));
            seg.hi = numerator(p.second) * (den / denominator(p.second));
            seg.coeff = numerator(c);
            segs.push_back(std::move(seg));
        }
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.lo < b.lo; });

    BigInt cur = numerator(x0) * (den / denominator(x0));
    cur %= den;
    if (cur < 0) cur += den;
    BigInt step = numerator(fractional_part(angle)) * (den / denominator(angle));
    const auto value_at = [&](const BigInt& pos) -> BigInt {
        auto it = std::upper_bound(segs.begin(), segs.end(), pos,
                                   [](const BigInt& v, const Seg& s) { return v < s.lo; });
        if (it == segs.begin()) return BigInt(0);
        --it;
        return pos < it->hi ? it->coeff : BigInt(0);
    };

    BigInt sum = 0;
    for (std::int64_t n = 1; n <= budget; ++n) {
        sum += value_at(cur);
        cur += step;
        if (cur >= den) cur -= den;
        if (n > n_floor && sum == 0) return n;
    }
    return std::nullopt;
}

} // namespace

std::optional<std::int64_t> cocycle_first_zero(const System& sys, const StepFunction& f,
                                               const Point& x, std::int64_t n_floor,
                                               std::int64_t budget) {
    if (budget < 1) throw std::invalid_argument("budget must be >= 1");
    if (n_floor < 0) throw std::invalid_argument("n_floor must be >= 0");
    validate_cocycle_function(f);
    if (const auto* rot = std::get_if<RotationSpec>(&sys.spec()))
        return first_zero_rotation(rot->angle, f, std::get<Rational>(x), n_floor, budget);

    BigInt sum = 0;
    Point cur = x;
    for (std::int64_t n = 1; n <= budget; ++n) {
        const Rational v = f.value_at(sys, cur);
        sum += numerator(v);
        cur = sys.orbit_point(cur, 1);
        if (n > n_floor && sum == 0) return n;
    }
    return std::nullopt;
}

} // namespace ergolab
