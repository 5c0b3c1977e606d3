#include "ergolab/interval_set.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ergolab {

IntervalSet IntervalSet::from_pieces(std::vector<Piece> pieces, Ambient a) {
    std::vector<Piece> kept;
    kept.reserve(pieces.size());
    for (auto& p : pieces) {
        if (p.first >= p.second) continue;
        if (p.first < 0) throw std::domain_error("interval extends below 0");
        if (a == Ambient::Unit && p.second > 1)
            throw std::domain_error("interval extends beyond 1 in unit ambient");
        kept.push_back(std::move(p));
    }
    std::sort(kept.begin(), kept.end());
    IntervalSet out(a);
    for (auto& p : kept) {
        if (!out.pieces_.empty() && p.first <= out.pieces_.back().second) {
            if (p.second > out.pieces_.back().second)
                out.pieces_.back().second = std::move(p.second);
        } else {
            out.pieces_.push_back(std::move(p));
        }
    }
    return out;
}

IntervalSet IntervalSet::interval(const Rational& l, const Rational& r, Ambient a) {
    return from_pieces({{l, r}}, a);
}

Rational IntervalSet::measure() const {
    Rational total(0);
    for (const auto& p : pieces_) total += p.second - p.first;
    return total;
}

bool IntervalSet::contains(const Rational& x) const {
    // pieces_ sorted by left endpoint; find the last piece starting at or before x.
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Rational& v, const Piece& p) { return v < p.first; });
    if (it == pieces_.begin()) return false;
    --it;
    return x < it->second;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    if (ambient_ != other.ambient_) throw std::domain_error("ambient mismatch");
    IntervalSet out(ambient_);
    std::size_t i = 0, j = 0;
    while (i < pieces_.size() && j < other.pieces_.size()) {
        const Rational lo = std::max(pieces_[i].first, other.pieces_[j].first);
        const Rational hi = std::min(pieces_[i].second, other.pieces_[j].second);
        if (lo < hi) out.pieces_.emplace_back(lo, hi);
        if (pieces_[i].second <= other.pieces_[j].second) ++i; else ++j;
    }
    return out;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    if (ambient_ != other.ambient_) throw std::domain_error("ambient mismatch");
    std::vector<Piece> all = pieces_;
    all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
    return from_pieces(std::move(all), ambient_);
}

IntervalSet IntervalSet::minus(const IntervalSet& other) const {
    if (ambient_ != other.ambient_) throw std::domain_error("ambient mismatch");
    IntervalSet out(ambient_);
    std::size_t j = 0;
    for (const auto& p : pieces_) {
        Rational cur = p.first;
        while (j < other.pieces_.size() && other.pieces_[j].second <= cur) ++j;
        std::size_t k = j;
        while (k < other.pieces_.size() && other.pieces_[k].first < p.second) {
            if (cur < other.pieces_[k].first)
                out.pieces_.emplace_back(cur, other.pieces_[k].first);
            if (other.pieces_[k].second > cur) cur = other.pieces_[k].second;
            if (cur >= p.second) break;
            ++k;
        }
        if (cur < p.second) out.pieces_.emplace_back(cur, p.second);
    }
    return out;
}

IntervalSet IntervalSet::symdiff(const IntervalSet& other) const {
    return minus(other).unite(other.minus(*this));
}

IntervalSet IntervalSet::complement() const {
    if (ambient_ != Ambient::Unit)
        throw std::domain_error("complement requires the unit ambient");
    IntervalSet out(Ambient::Unit);
    Rational cur(0);
    for (const auto& p : pieces_) {
        if (cur < p.first) out.pieces_.emplace_back(cur, p.first);
        cur = p.second;
    }
    if (cur < 1) out.pieces_.emplace_back(cur, Rational(1));
    return out;
}

IntervalSet IntervalSet::translate_mod1(const Rational& t) const {
    if (ambient_ != Ambient::Unit)
        throw std::domain_error("translate_mod1 requires the unit ambient");
    const Rational shift = fractional_part(t);
    std::vector<Piece> moved;
    moved.reserve(pieces_.size() + 1);
    for (const auto& p : pieces_) {
        Rational l = p.first + shift;
        Rational r = p.second + shift;
        if (r <= 1) {
            moved.emplace_back(l, r);
        } else if (l >= 1) {
            moved.emplace_back(l - 1, r - 1);
        } else {
            moved.emplace_back(l, Rational(1));
            moved.emplace_back(Rational(0), r - 1);
        }
    }
    return from_pieces(std::move(moved), Ambient::Unit);
}

IntervalSet IntervalSet::translate(const Rational& t) const {
    std::vector<Piece> moved;
    moved.reserve(pieces_.size());
    for (const auto& p : pieces_) moved.emplace_back(p.first + t, p.second + t);
    return from_pieces(std::move(moved), ambient_);
}

std::string IntervalSet::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (i) os << ", ";
        os << rational_str(pieces_[i].first) << ".." << rational_str(pieces_[i].second);
    }
    os << ']';
    return os.str();
}

} // namespace ergolab
