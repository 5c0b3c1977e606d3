#pragma once

#include "ergolab/rng.hpp"
#include "ergolab/set_ops.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ergolab {

struct RotationSpec {
    Rational angle; // must lie in [0,1); construction rejects anything else
};
struct BernoulliSpec {};
struct BakerSpec {};
struct TorusSpec {
    std::vector<Rational> angles;
};

using SystemSpec = std::variant<RotationSpec, BernoulliSpec, BakerSpec, TorusSpec>;

// Reproducible i.i.d. fair-bit sequence keyed by (seed, coordinate); the
// orbit moves the viewing offset, never mutates shared state, so points are
// freely copyable and thread-safe.
struct BitStream {
    std::uint64_t seed = 0;
    std::int64_t offset = 0;

    bool at(std::int64_t c) const {
        return (mix64(seed, static_cast<std::uint64_t>(c - offset)) & 1ULL) != 0;
    }
};

// A point of the underlying space: a circle position, a coded sequence, or a
// torus position, matching the system family.
using Point = std::variant<Rational, BitStream, std::vector<Rational>>;

// Measure-preserving transformation acting on one of the set families, with
// exact rational images and orbits.
class System {
public:
    explicit System(SystemSpec spec);

    const SystemSpec& spec() const { return spec_; }
    SetFamily family() const;
    std::string kind_name() const;

    // n-th forward image (negative n gives preimages); exact.
    MeasurableSet image(const MeasurableSet& s, std::int64_t n) const;

    // T^n applied to a point.
    Point orbit_point(const Point& x, std::int64_t n) const;
    bool point_in(const Point& x, const MeasurableSet& s) const;

    // A fresh point keyed by seed: circle and torus positions are exact
    // dyadic rationals u = k/2^64; coded systems get a seeded bit stream.
    Point seeded_point(std::uint64_t seed) const;

    // mu(T^n A cap B), exact.
    Rational correlation(const MeasurableSet& a, const MeasurableSet& b, std::int64_t n) const;

private:
    SystemSpec spec_;

    void check_family(const MeasurableSet& s) const;
};

System make_system(const SystemSpec& spec);

// k-th Fibonacci convergent F_k / F_{k+1} of the golden rotation number
// (F_1 = F_2 = 1), e.g. k = 15 gives 610/987.
Rational fibonacci_convergent(int k);

// Finite rational combination of indicator functions of one set family,
// optionally centered to zero mean.
struct StepFunction {
    std::vector<std::pair<Rational, MeasurableSet>> terms;
    bool centered = false;

    Rational mean_raw() const; // sum c * mu(S), before centering
    Rational value_at(const System& sys, const Point& x) const;
};

} // namespace ergolab
