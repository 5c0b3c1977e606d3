#include "ergolab/system.hpp"

#include <stdexcept>

namespace ergolab {

System::System(SystemSpec spec) : spec_(std::move(spec)) {
    if (auto* rot = std::get_if<RotationSpec>(&spec_)) {
        if (rot->angle < 0 || rot->angle >= 1) throw std::domain_error("rotation angle must lie in [0,1)");
    } else if (auto* tor = std::get_if<TorusSpec>(&spec_)) {
        if (tor->angles.empty()) throw std::invalid_argument("torus needs at least one angle");
        for (const auto& a : tor->angles)
            if (a < 0 || a >= 1) throw std::domain_error("torus angle must lie in [0,1)");
    }
}

System make_system(const SystemSpec& spec) { return System(spec); }

SetFamily System::family() const {
    if (std::holds_alternative<RotationSpec>(spec_)) return SetFamily::Interval;
    if (std::holds_alternative<BernoulliSpec>(spec_)) return SetFamily::Cylinder;
    if (std::holds_alternative<BakerSpec>(spec_)) return SetFamily::Rect;
    return SetFamily::Torus;
}

std::string System::kind_name() const {
    switch (family()) {
        case SetFamily::Interval: return "rotation";
        case SetFamily::Cylinder: return "bernoulli";
        case SetFamily::Rect: return "baker";
        case SetFamily::Torus: return "torus";
    }
    return "?";
}

void System::check_family(const MeasurableSet& s) const {
    if (family_of(s) != family())
        throw std::invalid_argument(std::string("set family ") + family_name(family_of(s)) +
                                    " does not match system family " + family_name(family()));
}

MeasurableSet System::image(const MeasurableSet& s, std::int64_t n) const {
    check_family(s);
    if (const auto* rot = std::get_if<RotationSpec>(&spec_)) {
        return std::get<IntervalSet>(s).translate_mod1(Rational(n) * rot->angle);
    }
    if (std::holds_alternative<BernoulliSpec>(spec_)) {
        return std::get<CylinderSet>(s).shift_coords(n);
    }
    if (std::holds_alternative<BakerSpec>(spec_)) {
        return std::get<RectSet>(s).baker_image(n);
    }
    const auto& tor = std::get<TorusSpec>(spec_);
    std::vector<Rational> shifts;
    shifts.reserve(tor.angles.size());
    for (const auto& a : tor.angles) shifts.push_back(fractional_part(Rational(n) * a));
    return std::get<TorusBox>(s).translate_mod1(shifts);
}

Point System::orbit_point(const Point& x, std::int64_t n) const {
    if (const auto* rot = std::get_if<RotationSpec>(&spec_)) {
        if (!std::holds_alternative<Rational>(x))
            throw std::invalid_argument("rotation point must be a rational");
        return fractional_part(std::get<Rational>(x) + Rational(n) * rot->angle);
    }
    if (std::holds_alternative<BernoulliSpec>(spec_) || std::holds_alternative<BakerSpec>(spec_)) {
        if (!std::holds_alternative<BitStream>(x))
            throw std::invalid_argument("coded point must be a bit stream");
        BitStream b = std::get<BitStream>(x);
        b.offset += n;
        return b;
    }
    const auto& tor = std::get<TorusSpec>(spec_);
    if (!std::holds_alternative<std::vector<Rational>>(x))
        throw std::invalid_argument("torus point must be a rational vector");
    auto v = std::get<std::vector<Rational>>(x);
    if (v.size() != tor.angles.size()) throw std::invalid_argument("torus dimension mismatch");
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = fractional_part(v[i] + Rational(n) * tor.angles[i]);
    return v;
}

bool System::point_in(const Point& x, const MeasurableSet& s) const {
    check_family(s);
    switch (family()) {
        case SetFamily::Interval:
            return std::get<IntervalSet>(s).contains(std::get<Rational>(x));
        case SetFamily::Cylinder: {
            const auto& b = std::get<BitStream>(x);
            return std::get<CylinderSet>(s).contains([&](std::int64_t c) { return b.at(c); });
        }
        case SetFamily::Rect: {
            const auto& b = std::get<BitStream>(x);
            return std::get<RectSet>(s).code().contains(
                [&](std::int64_t c) { return b.at(c); });
        }
        case SetFamily::Torus:
            return std::get<TorusBox>(s).contains(std::get<std::vector<Rational>>(x));
    }
    return false;
}

Point System::seeded_point(std::uint64_t seed) const {
    switch (family()) {
        case SetFamily::Interval: {
            // exact dyadic position k / 2^64
            const std::uint64_t k = mix64(seed);
            return Rational(BigInt(k), BigInt(1) << 64);
        }
        case SetFamily::Cylinder:
        case SetFamily::Rect:
            return BitStream{seed, 0};
        case SetFamily::Torus: {
            const auto& tor = std::get<TorusSpec>(spec_);
            std::vector<Rational> v;
            v.reserve(tor.angles.size());
            for (std::size_t i = 0; i < tor.angles.size(); ++i)
                v.push_back(Rational(BigInt(mix64(seed, i)), BigInt(1) << 64));
            return v;
        }
    }
    throw std::logic_error("unreachable");
}

Rational System::correlation(const MeasurableSet& a, const MeasurableSet& b, std::int64_t n) const {
    return ergolab::measure(apply_op(image(a, n), b, SetOp::Intersect));
}

Rational fibonacci_convergent(int k) {
    if (k < 1) throw std::invalid_argument("fibonacci index must be >= 1");
    BigInt prev = 1, cur = 1; // F_1, F_2
    for (int i = 2; i <= k; ++i) {
        BigInt next = prev + cur;
        prev = cur;
        cur = next;
    }
    // prev = F_k, cur = F_{k+1}
    return Rational(prev, cur);
}

Rational StepFunction::mean_raw() const {
    Rational m(0);
    for (const auto& [c, s] : terms) m += c * measure(s);
    return m;
}

Rational StepFunction::value_at(const System& sys, const Point& x) const {
    Rational v(0);
    for (const auto& [c, s] : terms)
        if (sys.point_in(x, s)) v += c;
    if (centered) v -= mean_raw();
    return v;
}

} // namespace ergolab
