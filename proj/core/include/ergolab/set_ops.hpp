#pragma once

#include "ergolab/cylinder_set.hpp"
#include "ergolab/interval_set.hpp"
#include "ergolab/rect_set.hpp"

#include <string>
#include <variant>
#include <vector>

namespace ergolab {

// Product of one interval set per torus coordinate. This family is closed
// under intersection and coordinatewise rotation, which is all the
// correlation machinery needs; it is not closed under union, so union,
// difference and complement are rejected for it.
struct TorusBox {
    std::vector<IntervalSet> factors;

    Rational measure() const;
    bool is_empty() const;
    TorusBox intersect(const TorusBox& other) const;
    TorusBox translate_mod1(const std::vector<Rational>& angles) const;
    bool contains(const std::vector<Rational>& point) const;

    bool operator==(const TorusBox& other) const = default;
    std::string str() const;
};

using MeasurableSet = std::variant<IntervalSet, CylinderSet, RectSet, TorusBox>;

enum class SetFamily { Interval, Cylinder, Rect, Torus };

enum class SetOp { Union, Intersect, Minus, Symdiff };

SetFamily family_of(const MeasurableSet& s);
const char* family_name(SetFamily f);

Rational measure(const MeasurableSet& s);
bool is_empty(const MeasurableSet& s);
bool sets_equal(const MeasurableSet& a, const MeasurableSet& b);
std::string set_str(const MeasurableSet& s);

// Throws std::invalid_argument when the families differ and std::domain_error
// when the family does not support the operation.
MeasurableSet apply_op(const MeasurableSet& a, const MeasurableSet& b, SetOp op);
MeasurableSet complement(const MeasurableSet& s);

// Literal grammar used by configs and tests:
//   interval sets  "0..1/2" or "0..1/4, 1/2..3/4"
//   cylinder sets  "{0:0,3:1}" or "{0:0}|{1:1,2:0}" ({} is the full space)
Rational parse_rational_literal(const std::string& text);
IntervalSet parse_interval_set(const std::string& text,
                               IntervalSet::Ambient a = IntervalSet::Ambient::Unit);
CylinderSet parse_cylinder_set(const std::string& text);

} // namespace ergolab
