#include "ergolab/pentropy.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergolab {

double progression_entropy(const System& sys, const Partition& xi, int j, std::int64_t big_l,
                           std::size_t cell_cap) {
    if (j < 1 || big_l < 1) throw std::invalid_argument("progression needs j >= 1 and L >= 1");
    Partition joined;
    bool first = true;
    for (std::int64_t t = 1; t <= big_l; ++t) {
        std::vector<MeasurableSet> cells;
        cells.reserve(xi.cells.size());
        for (const auto& c : xi.cells)
            cells.push_back(sys.image(c, static_cast<std::int64_t>(j) * t));
        Partition moved;
        moved.cells = std::move(cells);
        joined = first ? std::move(moved) : join(joined, moved, cell_cap);
        first = false;
    }
    return partition_entropy(joined) / static_cast<double>(big_l);
}

std::vector<EntropyProfilePoint> entropy_profile(const System& sys, const Partition& xi,
                                                 int j_max,
                                                 const std::vector<std::int64_t>& lengths,
                                                 std::size_t cell_cap) {
    if (j_max < 1) throw std::invalid_argument("profile needs j_max >= 1");
    if (lengths.size() != static_cast<std::size_t>(j_max))
        throw std::invalid_argument("profile needs one progression length per j");
    std::vector<EntropyProfilePoint> out;
    out.reserve(static_cast<std::size_t>(j_max));
    for (int j = 1; j <= j_max; ++j) {
        EntropyProfilePoint p;
        p.j = j;
        p.big_l = lengths[static_cast<std::size_t>(j - 1)];
        p.h_lo = p.h_hi = progression_entropy(sys, xi, j, p.big_l, cell_cap);
        out.push_back(p);
    }
    return out;
}

double profile_limsup(const std::vector<EntropyProfilePoint>& profile) {
    double best = 0;
    for (const auto& p : profile) best = std::max(best, p.h_hi);
    return best;
}

namespace {

double binary_entropy(double d) {
    double h = 0;
    if (d > 0 && d < 1) h = -d * std::log(d) - (1 - d) * std::log(1 - d);
    return h;
}

} // namespace

EntropyProfilePoint progression_entropy_rank_one(const RankOne& eng,
                                                 const std::vector<LevelSet>& xi, int j,
                                                 std::int64_t big_l, std::size_t cell_cap,
                                                 int stage_cap) {
    if (j < 1 || big_l < 1) throw std::invalid_argument("progression needs j >= 1 and L >= 1");
    if (xi.empty()) throw std::invalid_argument("empty partition");
    const int s = xi.front().stage;
    BigInt covered = 0;
    for (const auto& cell : xi) {
        if (cell.stage != s) throw std::invalid_argument("partition cells at mixed stages");
        covered += cell.count();
    }
    // cells must partition the stage-s base [0, h_s)
    {
        LevelSet all = xi.front();
        for (std::size_t t = 1; t < xi.size(); ++t) all = all.unite(xi[t]);
        if (covered != eng.height(s) || !(all == eng.full_base(s)))
            throw std::invalid_argument("cells do not partition the stage base");
    }

    // resolution stage: all shifts t*j must stay far below h_J
    const BigInt max_shift = BigInt(j) * big_l;
    int stage_j = s + 1;
    while (true) {
        if (stage_j > stage_cap)
            throw ResourceError("no stage within cap resolves the progression");
        // unresolved fraction <= (mass of levels lost to shifting + spacer
        // mass beyond stage s) relative to m_J; require the shift loss part
        // below 2^-20 of the tower
        const Rational loss = Rational(max_shift) * eng.width(stage_j);
        if (loss <= eng.mass(stage_j) * pow2(-20)) break;
        ++stage_j;
    }

    const BigInt h_j = eng.height(stage_j);
    std::vector<LevelSet> refined;
    refined.reserve(xi.size());
    for (const auto& cell : xi) refined.push_back(eng.refine(cell, stage_j));

    // words: run-list intersections of shifted refined cells over t = 1..L
    std::vector<LevelSet> words{eng.full_base(stage_j)};
    for (std::int64_t t = 1; t <= big_l; ++t) {
        const BigInt shift = BigInt(j) * t;
        std::vector<LevelSet> next;
        for (const auto& w : words) {
            for (const auto& cell : refined) {
                // levels l with l + shift inside the refined cell
                LevelSet moved = cell.shifted(-shift, h_j);
                LevelSet piece = w.intersect(moved);
                if (!piece.is_empty()) next.push_back(std::move(piece));
                if (next.size() > cell_cap)
                    throw ResourceError("progression join exceeds cell cap");
            }
        }
        words = std::move(next);
    }

    const Rational m = eng.mass(stage_j);
    Rational assigned(0);
    double h_known = 0;
    for (const auto& w : words) {
        const Rational q = Rational(w.count()) * eng.width(stage_j);
        assigned += q;
        const Rational prob = q / m;
        if (prob > 0) h_known -= to_double(prob) * log_rational(prob);
    }
    const Rational delta = (m - assigned) / m;
    const double d = to_double(delta);
    if (d > 0) h_known -= d * std::log(d);

    // entropy-perturbation enclosure around the lumped distribution
    const double k_outcomes =
        std::pow(static_cast<double>(xi.size()), static_cast<double>(big_l)) + 1.0;
    const double width = binary_entropy(d) + d * std::log(k_outcomes);

    EntropyProfilePoint p;
    p.j = j;
    p.big_l = big_l;
    p.h_lo = std::max(0.0, (h_known - width)) / static_cast<double>(big_l);
    p.h_hi = (h_known + width) / static_cast<double>(big_l);
    return p;
}

std::vector<EntropyProfilePoint> entropy_profile_rank_one(
    const RankOne& eng, const std::vector<LevelSet>& xi, int j_max,
    const std::vector<std::int64_t>& lengths, std::size_t cell_cap, int stage_cap) {
    if (j_max < 1) throw std::invalid_argument("profile needs j_max >= 1");
    if (lengths.size() != static_cast<std::size_t>(j_max))
        throw std::invalid_argument("profile needs one progression length per j");
    std::vector<EntropyProfilePoint> out;
    for (int j = 1; j <= j_max; ++j)
        out.push_back(progression_entropy_rank_one(eng, xi, j,
                                                   lengths[static_cast<std::size_t>(j - 1)],
                                                   cell_cap, stage_cap));
    return out;
}

} // namespace ergolab
