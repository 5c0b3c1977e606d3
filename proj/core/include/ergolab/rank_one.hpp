#pragma once

#include "ergolab/interval_set.hpp"
#include "ergolab/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ergolab {

// Cutting-and-stacking construction. Stage j has h_j levels of width w_j;
// the transition to stage j+1 cuts every level into r_j equal columns and
// inserts s_j(i) spacer levels above column i (i = 1..r_j), so
//   h_{j+1} = h_j * r_j + sum_i s_j(i),   w_{j+1} = w_j / r_j.
// Custom tables are extended beyond their last row by repeating it, which
// always yields finite total mass (spacer mass then shrinks by 1/r per
// stage). The infinite_L preset has diverging total mass.
struct RankOneSpec {
    enum class Kind { Staircase, Katok, InfiniteL, Custom };

    Kind kind = Kind::Staircase;
    std::vector<std::int64_t> cuts;           // Custom: r for each table row
    std::vector<std::vector<BigInt>> spacers; // Custom: s(i) per table row

    static RankOneSpec preset(const std::string& name);
    static RankOneSpec custom(std::vector<std::int64_t> cuts,
                              std::vector<std::vector<BigInt>> spacers);

    bool finite_measure() const { return kind != Kind::InfiniteL; }
    std::string name() const;
};

// Union of whole levels of one stage, as sorted disjoint half-open index
// runs within [0, h_stage).
struct LevelSet {
    int stage = 1;
    std::vector<std::pair<BigInt, BigInt>> runs;

    static LevelSet from_runs(int stage, std::vector<std::pair<BigInt, BigInt>> runs);

    BigInt count() const;
    bool is_empty() const { return runs.empty(); }
    bool contains(const BigInt& level) const;

    LevelSet intersect(const LevelSet& other) const;
    LevelSet unite(const LevelSet& other) const;
    // Complement within [0, h) for the caller-supplied stage height.
    LevelSet complement(const BigInt& h) const;
    // Runs shifted by delta, clipped to [0, h).
    LevelSet shifted(const BigInt& delta, const BigInt& h) const;

    bool operator==(const LevelSet& other) const = default;
};

struct StageSummary {
    int j = 1;
    BigInt h;
    Rational width;
    Rational total;               // m_j = h_j * w_j
    std::vector<BigInt> offsets;  // base level of each stage-j copy inside stage j+1
    Rational support;             // tower occupies [0, support) on the ray
};

// Two-sided enclosure of mu(T^n A cap B).
struct MeetBounds {
    Rational lo;
    Rational hi;
    int stage = 0;   // deepest stage the resolution used
    bool exact = false;
};

// Enclosure of the full construction mass and of the stage-j coverage ratio.
struct CoverBounds {
    int j = 1;
    Rational stage_mass;  // m_j
    Rational total_lo;    // m_inf lower bound
    Rational total_hi;    // m_inf upper bound
    Rational coverage_lo() const { return stage_mass / total_hi; }
    Rational coverage_hi() const { return stage_mass / total_lo; }
};

class RankOne {
public:
    explicit RankOne(RankOneSpec spec);

    const RankOneSpec& spec() const { return spec_; }

    std::int64_t cuts_at(int j) const;              // r_j, j >= 1
    BigInt spacer_at(int j, std::int64_t i) const;  // s_j(i), 1 <= i <= r_j
    BigInt spacer_sum(int j) const;

    BigInt height(int j) const;
    Rational width(int j) const;
    Rational mass(int j) const;
    const std::vector<BigInt>& offsets(int j) const;

    StageSummary stage(int j) const;

    // Left endpoint of the (single) interval occupied by a level; the tower
    // support is contiguous [0, m_j) because spacers are allocated left to
    // right from the previous free boundary.
    Rational level_left(int j, const BigInt& level) const;
    IntervalSet level_interval(int j, const BigInt& level) const;
    // Materializes a level set as intervals on the ray. Piece count is capped.
    IntervalSet to_intervals(const LevelSet& ls, std::size_t piece_cap = (1u << 22)) const;

    LevelSet full_base(int j) const;
    LevelSet refine(const LevelSet& ls, int to_stage) const;

    // Rigorous enclosure of mu(T^n A cap B), resolving through deeper stages
    // until the unresolved top mass is <= tol (default m_max(stageA, stageB)
    // * 2^-40). Throws ResourceError carrying the best bounds when stage_cap
    // is reached first.
    MeetBounds shifted_meet(const LevelSet& a, const LevelSet& b, const BigInt& n,
                            std::optional<Rational> tol = std::nullopt,
                            int stage_cap = 24) const;

    // The enclosure obtained by resolving at exactly one stage: lo counts the
    // pairs whose shift stays inside the stage column, hi adds the top-slab
    // mass of A that crosses the column boundary. Useful for matching against
    // independent reference computations depth for depth.
    MeetBounds meet_at_stage(const LevelSet& a, const LevelSet& b, const BigInt& n,
                             int resolve_stage) const;

    // Mass enclosure from exact partial sums to a horizon plus a certified
    // geometric tail bound. Throws std::domain_error for infinite mass specs.
    CoverBounds tower_cover(int j, int horizon = 0) const;

    // Level index and offset-within-level of a position in [0, m_j).
    std::pair<BigInt, Rational> locate(int j, const Rational& pos) const;

    // T^steps applied to a point of the stage-j tower, resolving through
    // deeper stages when the orbit crosses the top level.
    Rational transform_point(int j, const Rational& pos, std::int64_t steps,
                             int stage_cap = 64) const;

private:
    RankOneSpec spec_;

    mutable std::vector<std::int64_t> r_;                // r_[k] = r_{k+1}
    mutable std::vector<std::vector<BigInt>> spacer_;    // spacer_[k][i-1] = s_{k+1}(i)
    mutable std::vector<BigInt> height_;                 // height_[k] = h_{k+1}
    mutable std::vector<Rational> width_;                // width_[k] = w_{k+1}
    mutable std::vector<std::vector<BigInt>> offsets_;   // offsets_[k]: stage k+1 -> k+2

    void ensure_stage(int j) const;

    // Spacer tail ratio valid from stage k onward; (0,1) for finite kinds.
    Rational tail_ratio(int k) const;
};

} // namespace ergolab
