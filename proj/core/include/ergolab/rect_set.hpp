#pragma once

#include "ergolab/cylinder_set.hpp"
#include "ergolab/rational.hpp"

#include <string>
#include <vector>

namespace ergolab {

// Axis-aligned half-open rectangle with dyadic rational corners in [0,1)^2.
struct DyadicRect {
    Rational xl, xr, yl, yr;
};

// Finite union of dyadic rectangles in the unit square, stored as a coded
// cylinder set: binary digit i of x lives at coordinate +i (i >= 1), binary
// digit i of y at coordinate 1-i. Under this coding the baker transformation
// ((x + floor(2y))/2, 2y mod 1) acts as the coordinate shift, so iterating it
// never fragments the representation the way an explicit rectangle list does.
class RectSet {
public:
    RectSet() = default;

    // Validates that all corners are dyadic and inside the unit square.
    static RectSet from_rectangles(const std::vector<DyadicRect>& rects);
    static RectSet empty() { return RectSet(); }
    static RectSet full();

    const CylinderSet& code() const { return code_; }
    static RectSet from_code(CylinderSet code);

    bool is_empty() const { return code_.is_empty(); }
    Rational measure() const { return code_.measure(); }
    bool contains(const Rational& x, const Rational& y) const;

    RectSet intersect(const RectSet& o) const { return from_code(code_.intersect(o.code_)); }
    RectSet unite(const RectSet& o) const { return from_code(code_.unite(o.code_)); }
    RectSet minus(const RectSet& o) const { return from_code(code_.minus(o.code_)); }
    RectSet symdiff(const RectSet& o) const { return from_code(code_.symdiff(o.code_)); }
    RectSet complement() const { return from_code(code_.complement()); }

    // n-th iterate of the baker transformation applied to the set.
    RectSet baker_image(std::int64_t n) const { return from_code(code_.shift_coords(n)); }

    bool operator==(const RectSet& o) const { return code_ == o.code_; }

    std::string str() const { return code_.str(); }

    // Digit i >= 1 of v in binary (v in [0,1)).
    static bool binary_digit(const Rational& v, std::int64_t i);

private:
    CylinderSet code_;
};

} // namespace ergolab
