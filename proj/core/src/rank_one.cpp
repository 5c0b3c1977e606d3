#include "ergolab/rank_one.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace ergolab {

RankOneSpec RankOneSpec::preset(const std::string& name) {
    RankOneSpec s;
    if (name == "staircase") {
        s.kind = Kind::Staircase;
    } else if (name == "katok") {
        s.kind = Kind::Katok;
    } else if (name == "infinite_L") {
        s.kind = Kind::InfiniteL;
    } else {
        throw std::invalid_argument("unknown rank-one preset '" + name + "'");
    }
    return s;
}

RankOneSpec RankOneSpec::custom(std::vector<std::int64_t> cuts,
                                std::vector<std::vector<BigInt>> spacers) {
    if (cuts.empty() || cuts.size() != spacers.size())
        throw std::invalid_argument("custom table needs matching non-empty cuts and spacers");
    for (std::size_t t = 0; t < cuts.size(); ++t) {
        if (cuts[t] < 2) throw std::invalid_argument("cut counts must be >= 2");
        if (spacers[t].size() != static_cast<std::size_t>(cuts[t]))
            throw std::invalid_argument("spacer row " + std::to_string(t) +
                                        " must have one entry per column");
        for (const auto& v : spacers[t])
            if (v < 0) throw std::invalid_argument("spacer counts must be >= 0");
    }
    RankOneSpec s;
    s.kind = Kind::Custom;
    s.cuts = std::move(cuts);
    s.spacers = std::move(spacers);
    return s;
}

std::string RankOneSpec::name() const {
    switch (kind) {
        case Kind::Staircase: return "staircase";
        case Kind::Katok: return "katok";
        case Kind::InfiniteL: return "infinite_L";
        case Kind::Custom: return "custom";
    }
    return "?";
}

LevelSet LevelSet::from_runs(int stage, std::vector<std::pair<BigInt, BigInt>> runs) {
    std::vector<std::pair<BigInt, BigInt>> kept;
    for (auto& r : runs) {
        if (r.first < 0) throw std::invalid_argument("level run extends below 0");
        if (r.first < r.second) kept.push_back(std::move(r));
    }
    std::sort(kept.begin(), kept.end());
    LevelSet out;
    out.stage = stage;
    for (auto& r : kept) {
        if (!out.runs.empty() && r.first <= out.runs.back().second) {
            if (r.second > out.runs.back().second) out.runs.back().second = std::move(r.second);
        } else {
            out.runs.push_back(std::move(r));
        }
    }
    return out;
}

BigInt LevelSet::count() const {
    BigInt total = 0;
    for (const auto& r : runs) total += r.second - r.first;
    return total;
}

bool LevelSet::contains(const BigInt& level) const {
    auto it = std::upper_bound(runs.begin(), runs.end(), level,
                               [](const BigInt& v, const auto& r) { return v < r.first; });
    if (it == runs.begin()) return false;
    --it;
    return level < it->second;
}

LevelSet LevelSet::intersect(const LevelSet& other) const {
    if (stage != other.stage) throw std::invalid_argument("level set stage mismatch");
    LevelSet out;
    out.stage = stage;
    std::size_t i = 0, j = 0;
    while (i < runs.size() && j < other.runs.size()) {
        const BigInt lo = std::max(runs[i].first, other.runs[j].first);
        const BigInt hi = std::min(runs[i].second, other.runs[j].second);
        if (lo < hi) out.runs.emplace_back(lo, hi);
        if (runs[i].second <= other.runs[j].second) ++i; else ++j;
    }
    return out;
}

LevelSet LevelSet::unite(const LevelSet& other) const {
    if (stage != other.stage) throw std::invalid_argument("level set stage mismatch");
    auto all = runs;
    all.insert(all.end(), other.runs.begin(), other.runs.end());
    return from_runs(stage, std::move(all));
}

LevelSet LevelSet::complement(const BigInt& h) const {
    LevelSet out;
    out.stage = stage;
    BigInt cur = 0;
    for (const auto& r : runs) {
        if (cur < r.first) out.runs.emplace_back(cur, r.first);
        cur = r.second;
    }
    if (cur < h) out.runs.emplace_back(cur, h);
    return out;
}

LevelSet LevelSet::shifted(const BigInt& delta, const BigInt& h) const {
    LevelSet out;
    out.stage = stage;
    for (const auto& r : runs) {
        BigInt lo = std::max<BigInt>(r.first + delta, 0);
        BigInt hi = std::min<BigInt>(r.second + delta, h);
        if (lo < hi) out.runs.emplace_back(std::move(lo), std::move(hi));
    }
    return out;
}

RankOne::RankOne(RankOneSpec spec) : spec_(std::move(spec)) {
    if (spec_.kind == RankOneSpec::Kind::Custom && spec_.cuts.empty())
        throw std::invalid_argument("custom spec has no table");
    ensure_stage(2);
}

std::int64_t RankOne::cuts_at(int j) const {
    if (j < 1) throw std::invalid_argument("stage index must be >= 1");
    switch (spec_.kind) {
        case RankOneSpec::Kind::Staircase: return j + 1;
        case RankOneSpec::Kind::Katok: return 2 * static_cast<std::int64_t>(j);
        case RankOneSpec::Kind::InfiniteL: return 2;
        case RankOneSpec::Kind::Custom: {
            const std::size_t row = std::min<std::size_t>(j - 1, spec_.cuts.size() - 1);
            return spec_.cuts[row];
        }
    }
    throw std::logic_error("unreachable");
}

BigInt RankOne::spacer_at(int j, std::int64_t i) const {
    if (i < 1 || i > cuts_at(j)) throw std::invalid_argument("spacer column out of range");
    switch (spec_.kind) {
        case RankOneSpec::Kind::Staircase: return BigInt(i);
        case RankOneSpec::Kind::Katok: return i <= j ? BigInt(0) : BigInt(1);
        case RankOneSpec::Kind::InfiniteL: return BigInt(j) * height(j) + 1;
        case RankOneSpec::Kind::Custom: {
            const std::size_t row = std::min<std::size_t>(j - 1, spec_.cuts.size() - 1);
            return spec_.spacers[row][i - 1];
        }
    }
    throw std::logic_error("unreachable");
}

void RankOne::ensure_stage(int j) const {
    if (height_.empty()) {
        height_.push_back(BigInt(1));
        width_.push_back(Rational(1));
    }
    while (static_cast<int>(height_.size()) < j) {
        const int k = static_cast<int>(height_.size()); // building stage k+1 from stage k
        const std::int64_t r = cuts_at(k);
        std::vector<BigInt> row;
        row.reserve(r);
        BigInt sum = 0;
        for (std::int64_t i = 1; i <= r; ++i) {
            row.push_back(spacer_at(k, i));
            sum += row.back();
        }
        std::vector<BigInt> offs;
        offs.reserve(r);
        BigInt o = 0;
        for (std::int64_t i = 0; i < r; ++i) {
            offs.push_back(o);
            o += height_[k - 1] + row[i];
        }
        r_.resize(k);
        spacer_.resize(k);
        offsets_.resize(k);
        r_[k - 1] = r;
        spacer_[k - 1] = std::move(row);
        offsets_[k - 1] = std::move(offs);
        height_.push_back(height_[k - 1] * r + sum);
        width_.push_back(width_[k - 1] / r);
    }
}

BigInt RankOne::spacer_sum(int j) const {
    ensure_stage(j + 1);
    BigInt sum = 0;
    for (const auto& v : spacer_[j - 1]) sum += v;
    return sum;
}

BigInt RankOne::height(int j) const {
    if (j < 1) throw std::invalid_argument("stage index must be >= 1");
    ensure_stage(j);
    return height_[j - 1];
}

Rational RankOne::width(int j) const {
    if (j < 1) throw std::invalid_argument("stage index must be >= 1");
    ensure_stage(j);
    return width_[j - 1];
}

Rational RankOne::mass(int j) const { return Rational(height(j)) * width(j); }

const std::vector<BigInt>& RankOne::offsets(int j) const {
    if (j < 1) throw std::invalid_argument("stage index must be >= 1");
    ensure_stage(j + 1);
    return offsets_[j - 1];
}

StageSummary RankOne::stage(int j) const {
    StageSummary s;
    s.j = j;
    s.h = height(j);
    s.width = width(j);
    s.total = mass(j);
    s.offsets = offsets(j);
    s.support = s.total;
    return s;
}

Rational RankOne::level_left(int j, const BigInt& level) const {
    if (level < 0 || level >= height(j)) throw std::invalid_argument("level out of range");
    int k = j;
    BigInt l = level;
    Rational x(0);
    while (k > 1) {
        const auto& offs = offsets(k - 1); // stage k-1 copies inside stage k
        auto it = std::upper_bound(offs.begin(), offs.end(), l);
        const std::size_t i = static_cast<std::size_t>(it - offs.begin()) - 1; // 0-based column
        const BigInt within = l - offs[i];
        if (within < height_[k - 2]) {
            // inside copy i of the stage k-1 tower, horizontal slice i
            x += Rational(BigInt(i)) * width_[k - 1];
            l = within;
            --k;
        } else {
            // spacer number (within - h_{k-1}) above column i, placed after the
            // stage k-1 support at the running free boundary
            BigInt before = 0;
            for (std::size_t t = 0; t < i; ++t) before += spacer_[k - 2][t];
            const BigInt idx = before + (within - height_[k - 2]);
            return x + mass(k - 1) + Rational(idx) * width_[k - 1];
        }
    }
    return x;
}

IntervalSet RankOne::level_interval(int j, const BigInt& level) const {
    const Rational left = level_left(j, level);
    return IntervalSet::interval(left, left + width(j), IntervalSet::Ambient::Ray);
}

IntervalSet RankOne::to_intervals(const LevelSet& ls, std::size_t piece_cap) const {
    if (ls.count() > piece_cap)
        throw ResourceError("level set too large to materialize as intervals");
    std::vector<IntervalSet::Piece> pieces;
    for (const auto& r : ls.runs) {
        for (BigInt l = r.first; l < r.second; ++l) {
            const Rational left = level_left(ls.stage, l);
            pieces.emplace_back(left, left + width(ls.stage));
        }
    }
    return IntervalSet::from_pieces(std::move(pieces), IntervalSet::Ambient::Ray);
}

LevelSet RankOne::full_base(int j) const {
    return LevelSet::from_runs(j, {{BigInt(0), height(j)}});
}

LevelSet RankOne::refine(const LevelSet& ls, int to_stage) const {
    if (to_stage < ls.stage) throw std::invalid_argument("refine target below current stage");
    LevelSet cur = ls;
    for (int k = ls.stage; k < to_stage; ++k) {
        const auto& offs = offsets(k);
        std::vector<std::pair<BigInt, BigInt>> next;
        if (cur.runs.size() * offs.size() > (1u << 22))
            throw ResourceError("refinement run list too large");
        next.reserve(cur.runs.size() * offs.size());
        for (const auto& o : offs)
            for (const auto& r : cur.runs) next.emplace_back(r.first + o, r.second + o);
        cur = LevelSet::from_runs(k + 1, std::move(next));
    }
    return cur;
}

namespace {

struct MeetState {
    const RankOne& eng;
    int base_stage;
    const LevelSet& a0;
    const LevelSet& b0;
    std::map<std::pair<int, BigInt>, BigInt> count_memo;
    std::map<std::pair<int, BigInt>, BigInt> suffix_memo;
    std::vector<BigInt> a_sizes; // |A@k| for k >= base_stage

    const BigInt& a_size(int k) {
        while (static_cast<int>(a_sizes.size()) <= k - base_stage) {
            const int stage = base_stage + static_cast<int>(a_sizes.size()) - 1;
            a_sizes.push_back(a_sizes.back() * eng.cuts_at(stage));
        }
        return a_sizes[k - base_stage];
    }

    // #{(a,b) in A@k x B@k : b - a = delta}
    BigInt pair_count(int k, const BigInt& delta) {
        if (abs(delta) >= eng.height(k)) return BigInt(0);
        if (k == base_stage) {
            const LevelSet moved = b0.shifted(-delta, eng.height(base_stage));
            return a0.intersect(moved).count();
        }
        const auto key = std::make_pair(k, delta);
        auto it = count_memo.find(key);
        if (it != count_memo.end()) return it->second;
        const auto& offs = eng.offsets(k - 1);
        BigInt total = 0;
        for (const auto& oi : offs) {
            for (const auto& oj : offs) {
                const BigInt d2 = delta + oi - oj;
                if (abs(d2) < eng.height(k - 1)) total += pair_count(k - 1, d2);
            }
        }
        count_memo.emplace(key, total);
        return total;
    }

    // #{l in A@k : l >= c}
    BigInt suffix_count(int k, const BigInt& c) {
        if (c <= 0) return a_size(k);
        if (c >= eng.height(k)) return BigInt(0);
        if (k == base_stage) {
            BigInt total = 0;
            for (const auto& r : a0.runs) {
                const BigInt lo = std::max(r.first, c);
                if (lo < r.second) total += r.second - lo;
            }
            return total;
        }
        const auto key = std::make_pair(k, c);
        auto it = suffix_memo.find(key);
        if (it != suffix_memo.end()) return it->second;
        const auto& offs = eng.offsets(k - 1);
        BigInt total = 0;
        for (const auto& o : offs) total += suffix_count(k - 1, c - o);
        suffix_memo.emplace(key, total);
        return total;
    }
};

} // namespace

namespace {

MeetBounds evaluate_depth(MeetState& st, const RankOne& eng, int J, const BigInt& n,
                          const Rational& cap_mu) {
    const BigInt resolved = st.pair_count(J, n);
    BigInt unresolved = 0;
    if (n > 0) {
        unresolved = st.suffix_count(J, eng.height(J) - n);
    } else if (n < 0) {
        unresolved = st.a_size(J) - st.suffix_count(J, -n);
    }
    MeetBounds mb;
    mb.lo = Rational(resolved) * eng.width(J);
    mb.hi = std::min(mb.lo + Rational(unresolved) * eng.width(J), cap_mu);
    mb.stage = J;
    mb.exact = (mb.hi == mb.lo);
    return mb;
}

} // namespace

MeetBounds RankOne::shifted_meet(const LevelSet& a, const LevelSet& b, const BigInt& n,
                                 std::optional<Rational> tol, int stage_cap) const {
    const int j0 = std::max(a.stage, b.stage);
    if (stage_cap < j0) throw std::invalid_argument("stage cap below input stage");
    const LevelSet a0 = refine(a, j0);
    const LevelSet b0 = refine(b, j0);
    const Rational mu_a = Rational(a0.count()) * width(j0);
    const Rational mu_b = Rational(b0.count()) * width(j0);
    const Rational cap_mu = std::min(mu_a, mu_b);
    const Rational eps = tol ? *tol : mass(j0) * pow2(-40);

    MeetState st{*this, j0, a0, b0, {}, {}, {a0.count()}};

    MeetBounds best;
    bool have_best = false;
    for (int J = j0; J <= stage_cap; ++J) {
        const MeetBounds mb = evaluate_depth(st, *this, J, n, cap_mu);
        if (!have_best || mb.hi - mb.lo < best.hi - best.lo) {
            best = mb;
            have_best = true;
        }
        if (mb.hi - mb.lo <= eps) return mb;
    }
    throw ResourceError("shifted_meet stage cap " + std::to_string(stage_cap) +
                            " reached before tolerance",
                        to_double(best.lo), to_double(best.hi));
}

MeetBounds RankOne::meet_at_stage(const LevelSet& a, const LevelSet& b, const BigInt& n,
                                  int resolve_stage) const {
    const int j0 = std::max(a.stage, b.stage);
    if (resolve_stage < j0) throw std::invalid_argument("resolve stage below input stage");
    const LevelSet a0 = refine(a, j0);
    const LevelSet b0 = refine(b, j0);
    const Rational cap_mu =
        std::min(Rational(a0.count()) * width(j0), Rational(b0.count()) * width(j0));
    MeetState st{*this, j0, a0, b0, {}, {}, {a0.count()}};
    return evaluate_depth(st, *this, resolve_stage, n, cap_mu);
}

std::pair<BigInt, Rational> RankOne::locate(int j, const Rational& pos) const {
    if (pos < 0 || pos >= mass(j)) throw std::invalid_argument("position outside the tower");
    if (j == 1) return {BigInt(0), pos};
    if (pos < mass(j - 1)) {
        auto [lvl, off] = locate(j - 1, pos);
        const BigInt col = rational_floor(off / width(j));
        const std::size_t i = col.template convert_to<std::size_t>();
        return {offsets(j - 1)[i] + lvl, off - Rational(col) * width(j)};
    }
    // spacer block: fresh levels appended after the stage j-1 support
    const Rational rel = pos - mass(j - 1);
    const BigInt idx = rational_floor(rel / width(j));
    BigInt prefix = 0;
    const auto& offs = offsets(j - 1);
    for (std::size_t i = 0; i < offs.size(); ++i) {
        const BigInt s = spacer_at(j - 1, static_cast<std::int64_t>(i) + 1);
        if (idx < prefix + s) {
            const BigInt lvl = offs[i] + height(j - 1) + (idx - prefix);
            return {lvl, rel - Rational(idx) * width(j)};
        }
        prefix += s;
    }
    throw std::logic_error("position not inside any spacer block");
}

Rational RankOne::transform_point(int j, const Rational& pos, std::int64_t steps,
                                  int stage_cap) const {
    Rational cur = pos;
    std::int64_t remaining = steps;
    int stage_j = j;
    while (remaining != 0) {
        if (stage_j > stage_cap)
            throw ResourceError("orbit left every tower stage within the cap");
        if (cur >= mass(stage_j)) {
            ++stage_j;
            continue;
        }
        auto [lvl, off] = locate(stage_j, cur);
        const BigInt target = lvl + remaining;
        if (remaining > 0 ? target < height(stage_j) : target >= 0) {
            return level_left(stage_j, target) + off;
        }
        // move as far as this stage resolves, then retry one stage deeper
        BigInt partial;
        if (remaining > 0) {
            partial = height(stage_j) - 1 - lvl;
        } else {
            partial = -lvl;
        }
        if (partial != 0) {
            cur = level_left(stage_j, lvl + partial) + off;
            remaining -= partial.template convert_to<std::int64_t>();
        }
        ++stage_j;
    }
    return cur;
}

Rational RankOne::tail_ratio(int k) const {
    switch (spec_.kind) {
        case RankOneSpec::Kind::Staircase:
            // spacer mass added at stage t is w_t (t+2)/2, ratio (t+2)/(t(t+1)),
            // decreasing and < 1 from t = 2 on
            if (k < 3) throw std::logic_error("staircase tail ratio needs k >= 3");
            return Rational(k + 2, BigInt(k) * (k + 1));
        case RankOneSpec::Kind::Katok:
            // added mass w_t / 2, ratio 1/(2(t-1))
            if (k < 2) throw std::logic_error("katok tail ratio needs k >= 2");
            return Rational(1, 2 * (BigInt(k) - 1));
        case RankOneSpec::Kind::Custom: {
            // beyond the table every transition repeats the last row
            const std::int64_t r = spec_.cuts.back();
            return Rational(1, r);
        }
        case RankOneSpec::Kind::InfiniteL:
            throw std::domain_error("infinite_L has infinite total mass");
    }
    throw std::logic_error("unreachable");
}

CoverBounds RankOne::tower_cover(int j, int horizon) const {
    if (j < 1) throw std::invalid_argument("stage index must be >= 1");
    if (!spec_.finite_measure())
        throw std::domain_error("tower coverage undefined: construction has infinite total mass");
    int table_end = 1;
    if (spec_.kind == RankOneSpec::Kind::Custom)
        table_end = static_cast<int>(spec_.cuts.size()) + 1;
    int H = std::max({j, table_end, 4}) + 40;
    if (horizon > 0) H = std::max(H, horizon);

    const Rational partial = mass(H + 1); // includes spacer mass through stage H
    const Rational added_H = mass(H + 1) - mass(H);
    const Rational rho = tail_ratio(H + 1);
    const Rational tail_hi = added_H * rho / (Rational(1) - rho);

    CoverBounds out;
    out.j = j;
    out.stage_mass = mass(j);
    out.total_lo = partial;
    out.total_hi = partial + tail_hi;
    return out;
}

} // namespace ergolab
