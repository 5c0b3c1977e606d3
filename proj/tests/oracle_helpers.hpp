#pragma once

// Reference implementations the tests trust instead of the library under
// test. Everything here recomputes results from first principles (explicit
// geometry, word enumeration, high-precision arithmetic) and deliberately
// avoids the library's algorithms.

#include "ergolab/cylinder_set.hpp"
#include "ergolab/interval_set.hpp"
#include "ergolab/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using ergolab::BigInt;
using ergolab::Rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;

inline Float50 to_float50(const Rational& v) {
    return Float50(boost::multiprecision::numerator(v)) /
           Float50(boost::multiprecision::denominator(v));
}

// Natural log of a positive rational at 50 significant digits.
inline double log_oracle(const Rational& v) {
    return static_cast<double>(log(to_float50(v)));
}

// Shannon entropy -sum mu ln mu from exact cell measures, evaluated entirely
// at 50 digits before the final rounding.
inline double entropy_oracle(const std::vector<Rational>& measures) {
    Float50 h = 0;
    for (const auto& m : measures) {
        if (m <= 0) continue;
        const Float50 x = to_float50(m);
        h -= x * log(x);
    }
    return static_cast<double>(h);
}

// Cylinder-set measure by brute-force enumeration of all words over the
// constraint window.
inline Rational cylinder_measure_oracle(const ergolab::CylinderSet& s) {
    if (s.is_empty()) return Rational(0);
    std::int64_t lo = 0, hi = 0;
    if (!s.window(lo, hi)) return Rational(1); // full space
    const int w = static_cast<int>(hi - lo + 1);
    if (w > 24) throw std::runtime_error("oracle window too wide");
    std::int64_t inside = 0;
    for (std::int64_t word = 0; word < (std::int64_t(1) << w); ++word) {
        const auto bit_at = [&](std::int64_t c) -> bool {
            if (c < lo || c > hi) return false; // unconstrained coordinates ignored
            return ((word >> (c - lo)) & 1) != 0;
        };
        if (s.contains(bit_at)) ++inside;
    }
    return Rational(inside, BigInt(1) << w);
}

// Overlap measure of two interval unions by direct pairwise clipping.
inline Rational overlap_oracle(const std::vector<std::pair<Rational, Rational>>& a,
                               const std::vector<std::pair<Rational, Rational>>& b) {
    Rational total(0);
    for (const auto& [al, ar] : a)
        for (const auto& [bl, br] : b) {
            const Rational l = std::max(al, bl);
            const Rational r = std::min(ar, br);
            if (l < r) total += r - l;
        }
    return total;
}

// mu(A + t mod 1 meets B) for interval unions inside [0,1): translate each
// piece, split at the wrap, then clip pairwise.
inline Rational rotated_overlap_oracle(const std::vector<std::pair<Rational, Rational>>& a,
                                       const std::vector<std::pair<Rational, Rational>>& b,
                                       const Rational& t) {
    std::vector<std::pair<Rational, Rational>> moved;
    const Rational one(1);
    Rational shift = t - ergolab::rational_floor(t);
    for (const auto& [l, r] : a) {
        Rational nl = l + shift;
        Rational nr = r + shift;
        if (nr <= one) {
            moved.emplace_back(nl, nr);
        } else if (nl >= one) {
            moved.emplace_back(nl - one, nr - one);
        } else {
            moved.emplace_back(nl, one);
            moved.emplace_back(Rational(0), nr - one);
        }
    }
    return overlap_oracle(moved, b);
}

inline double poisson_pmf_oracle(double lambda, int k) {
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

// Literal cutting-and-stacking simulator. Levels are laid out on the ray by
// carrying out the construction exactly as described: cut every level of the
// current tower into r equal slices, stack the columns left to right, and
// append each column's spacer levels at the running free boundary. The level
// positions are the ground truth; set refinement goes through the geometry
// (interval membership of positions), not through any index recurrence.
class BruteTower {
public:
    using Cuts = std::function<std::int64_t(int)>;          // j -> r_j
    using Spacers = std::function<std::int64_t(int, int)>;  // (j, i) -> s_j(i), 1-based i

    BruteTower(Cuts cuts, Spacers spacers) : cuts_(std::move(cuts)), spacers_(std::move(spacers)) {
        pos_.push_back({Rational(0)});
        width_.push_back(Rational(1));
        free_.push_back(Rational(1));
    }

    // Extends the layout through the given stage (1-based).
    void build(int stage) {
        while (static_cast<int>(pos_.size()) < stage) {
            const int j = static_cast<int>(pos_.size()); // transition j -> j+1
            const std::int64_t r = cuts_(j);
            const Rational w = width_.back() / r;
            const auto& prev = pos_.back();
            Rational boundary = free_.back();
            std::vector<Rational> next;
            for (std::int64_t i = 0; i < r; ++i) {
                for (const auto& p : prev) next.push_back(p + w * i);
                const std::int64_t s = spacers_(j, static_cast<int>(i) + 1);
                for (std::int64_t t = 0; t < s; ++t) {
                    next.push_back(boundary);
                    boundary += w;
                }
            }
            pos_.push_back(std::move(next));
            width_.push_back(w);
            free_.push_back(boundary);
        }
    }

    std::int64_t height(int stage) const { return static_cast<std::int64_t>(pos_[stage - 1].size()); }
    const Rational& width(int stage) const { return width_[stage - 1]; }
    Rational mass(int stage) const { return width(stage) * height(stage); }
    const Rational& level_pos(int stage, std::int64_t level) const {
        return pos_[stage - 1][static_cast<std::size_t>(level)];
    }

    // Membership bitmap of a coarse-stage level set at a deeper stage,
    // decided by position containment in the coarse intervals.
    std::vector<bool> refine_geometric(int from_stage, const std::vector<std::int64_t>& levels,
                                       int to_stage) const {
        std::vector<std::pair<Rational, Rational>> spans;
        for (const std::int64_t l : levels) {
            const Rational& p = pos_[from_stage - 1][static_cast<std::size_t>(l)];
            spans.emplace_back(p, p + width_[from_stage - 1]);
        }
        std::sort(spans.begin(), spans.end());
        const auto& deep = pos_[to_stage - 1];
        std::vector<bool> member(deep.size(), false);
        for (std::size_t c = 0; c < deep.size(); ++c) {
            const Rational& x = deep[c];
            auto it = std::upper_bound(spans.begin(), spans.end(), x,
                                       [](const Rational& v, const auto& s) { return v < s.first; });
            if (it != spans.begin()) {
                --it;
                if (x < it->second) member[c] = true;
            }
        }
        return member;
    }

    struct Bounds {
        Rational lo;
        Rational hi;
    };

    // Enclosure of mu(T^n A meets B) resolved at exactly `depth`: on the
    // depth-stage tower T adds one to the level index; indices pushed past
    // the column are the unresolved top slab.
    Bounds meet_bounds(int stage_a, const std::vector<std::int64_t>& a, int stage_b,
                       const std::vector<std::int64_t>& b, std::int64_t n, int depth) const {
        const auto in_a = refine_geometric(stage_a, a, depth);
        const auto in_b = refine_geometric(stage_b, b, depth);
        const std::int64_t h = height(depth);
        std::int64_t resolved = 0, lost = 0;
        for (std::int64_t l = 0; l < h; ++l) {
            if (!in_a[static_cast<std::size_t>(l)]) continue;
            const std::int64_t target = l + n;
            if (target < 0 || target >= h) {
                ++lost;
            } else if (in_b[static_cast<std::size_t>(target)]) {
                ++resolved;
            }
        }
        const Rational w = width(depth);
        std::int64_t na = 0, nb = 0;
        for (const bool v : in_a) na += v;
        for (const bool v : in_b) nb += v;
        Bounds out;
        out.lo = w * resolved;
        const Rational cap = std::min(Rational(w * na), Rational(w * nb));
        out.hi = std::min(Rational(out.lo + w * lost), cap);
        return out;
    }

private:
    Cuts cuts_;
    Spacers spacers_;
    std::vector<std::vector<Rational>> pos_; // pos_[j-1][level]
    std::vector<Rational> width_;
    std::vector<Rational> free_; // next free boundary on the ray
};

} // namespace oracle
