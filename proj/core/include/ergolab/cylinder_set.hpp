#pragma once

#include "ergolab/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ergolab {

// One partial assignment of binary coordinates: coordinate index -> bit.
// The empty assignment is the full space.
struct ElementaryCylinder {
    std::map<std::int64_t, bool> bits;

    bool compatible(const ElementaryCylinder& other) const;
    // Precondition: compatible. Union of the two constraint maps.
    ElementaryCylinder merge(const ElementaryCylinder& other) const;

    auto operator<=>(const ElementaryCylinder&) const = default;
};

// Measurable subset of the two-sided binary sequence space {0,1}^Z with the
// fair-coin product measure, represented as a finite disjoint union of
// elementary cylinders. Kept sorted; canonicalize() additionally merges
// sibling pairs (same coordinates, exactly one differing bit) to a fixpoint,
// so each part carries a minimal constraint window.
//
// Equality is semantic (same set of sequences), decided through exact
// measures of intersections, because distinct disjoint covers of the same
// set exist even at merge fixpoint.
class CylinderSet {
public:
    CylinderSet() = default;

    static CylinderSet empty() { return CylinderSet(); }
    static CylinderSet full();
    static CylinderSet cylinder(std::map<std::int64_t, bool> bits);
    // Disjointness of the provided parts is the caller's responsibility.
    static CylinderSet from_disjoint_parts(std::vector<ElementaryCylinder> parts);

    const std::vector<ElementaryCylinder>& parts() const { return parts_; }
    bool is_empty() const { return parts_.empty(); }

    Rational measure() const;
    bool contains(const std::function<bool(std::int64_t)>& bit_at) const;

    CylinderSet intersect(const CylinderSet& other) const;
    CylinderSet unite(const CylinderSet& other) const;
    CylinderSet minus(const CylinderSet& other) const;
    CylinderSet symdiff(const CylinderSet& other) const;
    CylinderSet complement() const;

    // Relabels every coordinate z to z + n (preimage view of the shift).
    CylinderSet shift_coords(std::int64_t n) const;

    CylinderSet canonicalize() const;

    // Minimal closed window [m, M] covering every constrained coordinate.
    // Empty or unconstrained sets have no window.
    bool window(std::int64_t& m, std::int64_t& M) const;
    // Admissible words over the window, each of length M-m+1, lexicographic.
    // Throws ResourceError if the window exceeds max_bits.
    std::vector<std::string> words(int max_bits = 20) const;

    bool operator==(const CylinderSet& other) const;

    std::string str() const;

private:
    // Sorted, pairwise disjoint.
    std::vector<ElementaryCylinder> parts_;

    // Parts of (e minus union of others), appended to out.
    static void subtract_into(const ElementaryCylinder& e,
                              const std::vector<ElementaryCylinder>& others,
                              std::size_t from,
                              std::vector<ElementaryCylinder>& out);
};

} // namespace ergolab
