#include "ergolab/rect_set.hpp"

#include <stdexcept>

namespace ergolab {

namespace {

bool is_power_of_two(const BigInt& v) {
    return v > 0 && (v & (v - 1)) == 0;
}

void check_dyadic(const Rational& v, const char* what) {
    if (v < 0 || v > 1) throw std::domain_error(std::string(what) + " outside [0,1]");
    if (!is_power_of_two(denominator(v)))
        throw std::domain_error(std::string(what) + " is not dyadic: " + rational_str(v));
}

// Maximal dyadic blocks covering [l, r); each block is (depth s, index k)
// meaning [k/2^s, (k+1)/2^s).
std::vector<std::pair<long, BigInt>> dyadic_blocks(const Rational& l, const Rational& r) {
    std::vector<std::pair<long, BigInt>> out;
    Rational cur = l;
    while (cur < r) {
        long s = static_cast<long>(msb(denominator(cur)));
        // Largest block aligned at cur: shrink until it fits in [cur, r).
        while (true) {
            Rational width = pow2(-s);
            if (cur + width <= r) break;
            ++s;
        }
        BigInt k = numerator(cur) << (s - static_cast<long>(msb(denominator(cur))));
        out.emplace_back(s, k);
        cur += pow2(-s);
    }
    return out;
}

// Prefix constraints for the block [k/2^s, (k+1)/2^s): digit j of k (from the
// most significant of s digits) pins one coordinate.
void block_bits(long s, const BigInt& k, bool x_axis, ElementaryCylinder& into) {
    for (long j = 1; j <= s; ++j) {
        const bool bit = ((k >> (s - j)) & 1) != 0;
        const std::int64_t coord = x_axis ? j : (1 - j);
        into.bits[coord] = bit;
    }
}

} // namespace

RectSet RectSet::full() {
    RectSet s;
    s.code_ = CylinderSet::full();
    return s;
}

RectSet RectSet::from_code(CylinderSet code) {
    RectSet s;
    s.code_ = std::move(code).canonicalize();
    return s;
}

RectSet RectSet::from_rectangles(const std::vector<DyadicRect>& rects) {
    CylinderSet acc;
    for (const auto& r : rects) {
        check_dyadic(r.xl, "x left");
        check_dyadic(r.xr, "x right");
        check_dyadic(r.yl, "y left");
        check_dyadic(r.yr, "y right");
        if (r.xl >= r.xr || r.yl >= r.yr) continue;
        std::vector<ElementaryCylinder> pieces;
        for (const auto& [sx, kx] : dyadic_blocks(r.xl, r.xr)) {
            for (const auto& [sy, ky] : dyadic_blocks(r.yl, r.yr)) {
                ElementaryCylinder e;
                block_bits(sx, kx, true, e);
                block_bits(sy, ky, false, e);
                pieces.push_back(std::move(e));
            }
        }
        acc = acc.unite(CylinderSet::from_disjoint_parts(std::move(pieces)));
    }
    return from_code(std::move(acc));
}

bool RectSet::binary_digit(const Rational& v, std::int64_t i) {
    // floor(v * 2^i) mod 2
    BigInt scaled = (numerator(v) << i) / denominator(v);
    return (scaled & 1) != 0;
}

bool RectSet::contains(const Rational& x, const Rational& y) const {
    if (x < 0 || x >= 1 || y < 0 || y >= 1) return false;
    return code_.contains([&](std::int64_t c) {
        return c >= 1 ? binary_digit(x, c) : binary_digit(y, 1 - c);
    });
}

} // namespace ergolab
