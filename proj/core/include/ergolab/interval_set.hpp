#pragma once

#include "ergolab/rational.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ergolab {

// Finite union of half-open rational intervals [l, r), kept canonical:
// nonempty pieces, sorted by left endpoint, pairwise disjoint, and no two
// adjacent pieces touching (r_k < l_{k+1} strictly).
//
// ambient Unit confines pieces to [0, 1); ambient Ray allows any pieces in
// [0, +inf) (used for rank-one towers of total mass possibly > 1).
class IntervalSet {
public:
    enum class Ambient { Unit, Ray };

    using Piece = std::pair<Rational, Rational>;

    IntervalSet() : ambient_(Ambient::Unit) {}
    explicit IntervalSet(Ambient a) : ambient_(a) {}

    // Canonicalizes: drops empty pieces, sorts, merges overlaps and adjacency.
    // Throws std::domain_error if a piece leaves the ambient space.
    static IntervalSet from_pieces(std::vector<Piece> pieces, Ambient a = Ambient::Unit);
    static IntervalSet interval(const Rational& l, const Rational& r, Ambient a = Ambient::Unit);
    static IntervalSet empty(Ambient a = Ambient::Unit) { return IntervalSet(a); }
    static IntervalSet full_unit() { return interval(Rational(0), Rational(1)); }

    const std::vector<Piece>& pieces() const { return pieces_; }
    Ambient ambient() const { return ambient_; }
    bool is_empty() const { return pieces_.empty(); }
    std::size_t piece_count() const { return pieces_.size(); }

    Rational measure() const;
    bool contains(const Rational& x) const;

    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet minus(const IntervalSet& other) const;
    IntervalSet symdiff(const IntervalSet& other) const;

    // Complement within [0, 1). Unit ambient only.
    IntervalSet complement() const;

    // x -> x + t mod 1 applied to every piece (unit ambient only).
    IntervalSet translate_mod1(const Rational& t) const;
    // x -> x + t, t such that no piece leaves [0, inf) (ray ambient).
    IntervalSet translate(const Rational& t) const;

    bool operator==(const IntervalSet& other) const {
        return ambient_ == other.ambient_ && pieces_ == other.pieces_;
    }

    std::string str() const;

private:
    std::vector<Piece> pieces_;
    Ambient ambient_;
};

} // namespace ergolab
