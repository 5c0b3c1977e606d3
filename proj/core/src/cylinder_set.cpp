#include "ergolab/cylinder_set.hpp"

#include "ergolab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ergolab {

bool ElementaryCylinder::compatible(const ElementaryCylinder& other) const {
    const auto* small = this;
    const auto* big = &other;
    if (small->bits.size() > big->bits.size()) std::swap(small, big);
    for (const auto& [c, v] : small->bits) {
        auto it = big->bits.find(c);
        if (it != big->bits.end() && it->second != v) return false;
    }
    return true;
}

ElementaryCylinder ElementaryCylinder::merge(const ElementaryCylinder& other) const {
    ElementaryCylinder out = *this;
    out.bits.insert(other.bits.begin(), other.bits.end());
    return out;
}

CylinderSet CylinderSet::full() {
    CylinderSet s;
    s.parts_.push_back(ElementaryCylinder{});
    return s;
}

CylinderSet CylinderSet::cylinder(std::map<std::int64_t, bool> bits) {
    CylinderSet s;
    s.parts_.push_back(ElementaryCylinder{std::move(bits)});
    return s;
}

CylinderSet CylinderSet::from_disjoint_parts(std::vector<ElementaryCylinder> parts) {
    CylinderSet s;
    s.parts_ = std::move(parts);
    std::sort(s.parts_.begin(), s.parts_.end());
    return s;
}

Rational CylinderSet::measure() const {
    Rational total(0);
    for (const auto& p : parts_) total += pow2(-static_cast<long>(p.bits.size()));
    return total;
}

bool CylinderSet::contains(const std::function<bool(std::int64_t)>& bit_at) const {
    for (const auto& p : parts_) {
        bool ok = true;
        for (const auto& [c, v] : p.bits) {
            if (bit_at(c) != v) { ok = false; break; }
        }
        if (ok) return true;
    }
    return false;
}

CylinderSet CylinderSet::intersect(const CylinderSet& other) const {
    CylinderSet out;
    for (const auto& a : parts_)
        for (const auto& b : other.parts_)
            if (a.compatible(b)) out.parts_.push_back(a.merge(b));
    std::sort(out.parts_.begin(), out.parts_.end());
    return out;
}

// Splits e \ f into elementary pieces (empty when e is a subset of f),
// then recursively removes others[from..] from each piece.
void CylinderSet::subtract_into(const ElementaryCylinder& e,
                                const std::vector<ElementaryCylinder>& others,
                                std::size_t from,
                                std::vector<ElementaryCylinder>& out) {
    if (from == others.size()) {
        out.push_back(e);
        return;
    }
    const auto& f = others[from];
    if (!e.compatible(f)) {
        subtract_into(e, others, from + 1, out);
        return;
    }
    ElementaryCylinder acc = e;
    bool proper = false;
    for (const auto& [c, v] : f.bits) {
        if (acc.bits.count(c)) continue;
        proper = true;
        ElementaryCylinder piece = acc;
        piece.bits[c] = !v;
        subtract_into(piece, others, from + 1, out);
        acc.bits[c] = v;
    }
    if (!proper) {
        // e already lies inside f: nothing survives.
        return;
    }
}

CylinderSet CylinderSet::minus(const CylinderSet& other) const {
    CylinderSet out;
    for (const auto& e : parts_) subtract_into(e, other.parts_, 0, out.parts_);
    std::sort(out.parts_.begin(), out.parts_.end());
    return out;
}

CylinderSet CylinderSet::unite(const CylinderSet& other) const {
    CylinderSet extra = other.minus(*this);
    CylinderSet out;
    out.parts_ = parts_;
    out.parts_.insert(out.parts_.end(), extra.parts_.begin(), extra.parts_.end());
    std::sort(out.parts_.begin(), out.parts_.end());
    return out;
}

CylinderSet CylinderSet::symdiff(const CylinderSet& other) const {
    return minus(other).unite(other.minus(*this));
}

CylinderSet CylinderSet::complement() const {
    return full().minus(*this);
}

CylinderSet CylinderSet::shift_coords(std::int64_t n) const {
    CylinderSet out;
    out.parts_.reserve(parts_.size());
    for (const auto& p : parts_) {
        ElementaryCylinder q;
        for (const auto& [c, v] : p.bits) q.bits.emplace(c + n, v);
        out.parts_.push_back(std::move(q));
    }
    std::sort(out.parts_.begin(), out.parts_.end());
    return out;
}

CylinderSet CylinderSet::canonicalize() const {
    std::vector<ElementaryCylinder> work = parts_;
    bool merged = true;
    while (merged) {
        merged = false;
        std::sort(work.begin(), work.end());
        for (std::size_t i = 0; i + 1 < work.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < work.size(); ++j) {
                const auto& a = work[i];
                const auto& b = work[j];
                if (a.bits.size() != b.bits.size()) continue;
                std::int64_t diff_coord = 0;
                int diffs = 0;
                bool same_coords = true;
                auto ia = a.bits.begin();
                auto ib = b.bits.begin();
                for (; ia != a.bits.end(); ++ia, ++ib) {
                    if (ia->first != ib->first) { same_coords = false; break; }
                    if (ia->second != ib->second) { ++diffs; diff_coord = ia->first; }
                }
                if (!same_coords || diffs != 1) continue;
                ElementaryCylinder m = a;
                m.bits.erase(diff_coord);
                work.erase(work.begin() + j);
                work[i] = std::move(m);
                merged = true;
                break;
            }
        }
    }
    std::sort(work.begin(), work.end());
    CylinderSet out;
    out.parts_ = std::move(work);
    return out;
}

bool CylinderSet::window(std::int64_t& m, std::int64_t& M) const {
    bool found = false;
    for (const auto& p : parts_) {
        if (p.bits.empty()) return false;
        if (!found) {
            m = p.bits.begin()->first;
            M = p.bits.rbegin()->first;
            found = true;
        } else {
            m = std::min(m, p.bits.begin()->first);
            M = std::max(M, p.bits.rbegin()->first);
        }
    }
    return found;
}

std::vector<std::string> CylinderSet::words(int max_bits) const {
    std::int64_t m = 0, M = 0;
    if (!window(m, M)) {
        if (is_empty()) return {};
        throw std::domain_error("unconstrained set has no finite word list");
    }
    const std::int64_t width = M - m + 1;
    if (width > max_bits)
        throw ResourceError("window width " + std::to_string(width) + " exceeds word cap");
    std::vector<std::string> out;
    const std::uint64_t count = 1ULL << width;
    // First coordinate in the most significant position keeps the output in
    // lexicographic word order.
    for (std::uint64_t w = 0; w < count; ++w) {
        const auto bit_at = [&](std::int64_t c) {
            return ((w >> (M - c)) & 1ULL) != 0;
        };
        for (const auto& p : parts_) {
            bool ok = true;
            for (const auto& [c, v] : p.bits)
                if (bit_at(c) != v) { ok = false; break; }
            if (ok) {
                std::string s;
                for (std::int64_t c = m; c <= M; ++c) s.push_back(bit_at(c) ? '1' : '0');
                out.push_back(std::move(s));
                break;
            }
        }
    }
    return out;
}

bool CylinderSet::operator==(const CylinderSet& other) const {
    const Rational ma = measure();
    const Rational mb = other.measure();
    if (ma != mb) return false;
    return intersect(other).measure() == ma;
}

std::string CylinderSet::str() const {
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << " | ";
        os << '{';
        bool first = true;
        for (const auto& [c, v] : parts_[i].bits) {
            if (!first) os << ',';
            first = false;
            os << c << ':' << (v ? '1' : '0');
        }
        os << '}';
    }
    return os.str();
}

} // namespace ergolab
