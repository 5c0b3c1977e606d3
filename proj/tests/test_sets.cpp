#include "oracle_helpers.hpp"

#include "ergolab/errors.hpp"
#include "ergolab/partition.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/set_ops.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace ergolab;

namespace {

IntervalSet iv(const Rational& l, const Rational& r) { return IntervalSet::interval(l, r); }

// Random dyadic interval set, up to 3 pieces with denominator 64.
IntervalSet random_interval_set(SplitMix& g) {
    const int pieces = 1 + static_cast<int>(g.next_below(3));
    std::vector<Rational> cuts;
    for (int i = 0; i < 2 * pieces; ++i) cuts.push_back(Rational(g.next_below(65), 64));
    std::sort(cuts.begin(), cuts.end());
    std::vector<IntervalSet::Piece> ps;
    for (int i = 0; i < pieces; ++i) ps.emplace_back(cuts[2 * i], cuts[2 * i + 1]);
    return IntervalSet::from_pieces(ps);
}

CylinderSet random_cylinder_set(SplitMix& g) {
    CylinderSet s = CylinderSet::empty();
    const int parts = 1 + static_cast<int>(g.next_below(3));
    for (int p = 0; p < parts; ++p) {
        std::map<std::int64_t, bool> bits;
        const int k = 1 + static_cast<int>(g.next_below(3));
        for (int i = 0; i < k; ++i)
            bits[static_cast<std::int64_t>(g.next_below(7)) - 3] = (g.next() & 1) != 0;
        s = s.unite(CylinderSet::cylinder(bits));
    }
    return s;
}

std::vector<Rational> sorted_measures(const Partition& p) {
    std::vector<Rational> m;
    for (const auto& c : p.cells) m.push_back(measure(c));
    std::sort(m.begin(), m.end());
    return m;
}

} // namespace

TEST_CASE("interval intersection of overlapping halves") {
    const IntervalSet a = iv(Rational(0), Rational(1, 2));
    const IntervalSet b = iv(Rational(1, 4), Rational(3, 4));
    const IntervalSet c = a.intersect(b);
    CHECK(c == iv(Rational(1, 4), Rational(1, 2)));
    CHECK(c.measure() == Rational(1, 4));
}

TEST_CASE("interval canonicalization merges and sorts") {
    const IntervalSet s = IntervalSet::from_pieces({{Rational(1, 2), Rational(3, 4)},
                                                    {Rational(0), Rational(1, 4)},
                                                    {Rational(1, 4), Rational(1, 2)},
                                                    {Rational(7, 8), Rational(7, 8)}});
    CHECK(s.piece_count() == 1);
    CHECK(s == iv(Rational(0), Rational(3, 4)));
    CHECK_THROWS_AS(IntervalSet::from_pieces({{Rational(1, 2), Rational(3, 2)}}),
                    std::domain_error);
}

TEST_CASE("interval complement and symdiff identities") {
    const IntervalSet a = IntervalSet::from_pieces(
        {{Rational(0), Rational(1, 8)}, {Rational(1, 2), Rational(5, 8)}});
    CHECK(a.symdiff(a).is_empty());
    const IntervalSet c = a.complement();
    CHECK(a.intersect(c).is_empty());
    CHECK(a.unite(c) == IntervalSet::full_unit());
    CHECK(a.measure() + c.measure() == Rational(1));
}

TEST_CASE("interval translate_mod1 preserves measure and matches direct clipping") {
    SplitMix g(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const IntervalSet a = random_interval_set(g);
        const IntervalSet b = random_interval_set(g);
        const Rational t(g.next_below(64), 64);
        const IntervalSet moved = a.translate_mod1(t);
        CHECK(moved.measure() == a.measure());
        CHECK(moved.intersect(b).measure() == oracle::rotated_overlap_oracle(a.pieces(), b.pieces(), t));
    }
}

TEST_CASE("interval additivity holds exactly on random instances") {
    SplitMix g(77);
    for (int trial = 0; trial < 60; ++trial) {
        const IntervalSet a = random_interval_set(g);
        const IntervalSet b = random_interval_set(g);
        CHECK(a.measure() + b.measure() == a.unite(b).measure() + a.intersect(b).measure());
        CHECK(a.minus(b).measure() == a.measure() - a.intersect(b).measure());
        CHECK(a.symdiff(b).measure() == a.unite(b).measure() - a.intersect(b).measure());
    }
}

TEST_CASE("ray ambient allows mass beyond one but rejects complement") {
    const IntervalSet r = IntervalSet::interval(Rational(3), Rational(9, 2), IntervalSet::Ambient::Ray);
    CHECK(r.measure() == Rational(3, 2));
    CHECK(r.translate(Rational(5)).pieces().front().first == Rational(8));
    CHECK_THROWS_AS(r.complement(), std::domain_error);
    CHECK_THROWS_AS(r.translate(Rational(-4)), std::domain_error);
}

TEST_CASE("cylinder intersection of two coordinate constraints") {
    const CylinderSet a = CylinderSet::cylinder({{0, false}});
    const CylinderSet b = CylinderSet::cylinder({{1, false}});
    const CylinderSet c = a.intersect(b);
    CHECK(c.measure() == Rational(1, 4));
    std::int64_t lo = 0, hi = 0;
    CHECK(c.window(lo, hi));
    CHECK(lo == 0);
    CHECK(hi == 1);
    CHECK(c.symdiff(c).is_empty());
}

TEST_CASE("cylinder measures match word enumeration on random sets") {
    SplitMix g(5150);
    for (int trial = 0; trial < 40; ++trial) {
        const CylinderSet a = random_cylinder_set(g);
        const CylinderSet b = random_cylinder_set(g);
        CHECK(a.measure() == oracle::cylinder_measure_oracle(a));
        CHECK(a.measure() + b.measure() == a.unite(b).measure() + a.intersect(b).measure());
        CHECK(a.intersect(b).measure() == oracle::cylinder_measure_oracle(a.intersect(b)));
        CHECK(a.minus(b).measure() == oracle::cylinder_measure_oracle(a.minus(b)));
        CHECK(a.complement().measure() == Rational(1) - a.measure());
    }
}

TEST_CASE("cylinder canonicalize is idempotent and structural") {
    SplitMix g(31);
    for (int trial = 0; trial < 30; ++trial) {
        const CylinderSet s = random_cylinder_set(g).canonicalize();
        const CylinderSet again = s.canonicalize();
        CHECK(s.parts() == again.parts());
        CHECK(s.measure() == again.measure());
    }
    // Two different disjoint covers of the full space compare equal.
    const CylinderSet split0 =
        CylinderSet::cylinder({{0, false}}).unite(CylinderSet::cylinder({{0, true}}));
    const CylinderSet split5 =
        CylinderSet::cylinder({{5, false}}).unite(CylinderSet::cylinder({{5, true}}));
    CHECK(split0 == split5);
    CHECK(split0 == CylinderSet::full());
}

TEST_CASE("cylinder shift relabels coordinates and keeps measure") {
    const CylinderSet a = CylinderSet::cylinder({{0, false}, {2, true}});
    const CylinderSet moved = a.shift_coords(3);
    CHECK(moved.measure() == a.measure());
    CHECK(moved == CylinderSet::cylinder({{3, false}, {5, true}}));
    CHECK(moved.shift_coords(-3) == a);
}

TEST_CASE("cylinder word listing covers the window") {
    const CylinderSet s = CylinderSet::cylinder({{0, false}, {3, true}});
    const auto words = s.words();
    REQUIRE(words.size() == 4);
    CHECK(std::is_sorted(words.begin(), words.end()));
    for (const auto& w : words) {
        REQUIRE(w.size() == 4);
        CHECK(w.front() == '0');
        CHECK(w.back() == '1');
    }
    // A window wider than the cap is refused rather than enumerated.
    CylinderSet wide = CylinderSet::cylinder({{0, false}, {30, true}});
    CHECK_THROWS_AS(wide.words(), ResourceError);
}

TEST_CASE("rect sets code dyadic rectangles exactly") {
    const RectSet q = RectSet::from_rectangles({{Rational(0), Rational(1, 2), Rational(0), Rational(1, 2)}});
    CHECK(q.measure() == Rational(1, 4));
    CHECK(q.contains(Rational(1, 4), Rational(1, 4)));
    CHECK(!q.contains(Rational(3, 4), Rational(1, 4)));
    CHECK(!q.contains(Rational(1, 2), Rational(0)));

    const RectSet two = RectSet::from_rectangles(
        {{Rational(0), Rational(1, 4), Rational(0), Rational(1)},
         {Rational(1, 2), Rational(3, 4), Rational(1, 4), Rational(3, 4)}});
    CHECK(two.measure() == Rational(1, 4) + Rational(1, 8));
    CHECK(two.complement().measure() == Rational(1) - two.measure());
    CHECK_THROWS_AS(RectSet::from_rectangles({{Rational(0), Rational(1, 3), Rational(0), Rational(1)}}),
                    std::domain_error);
}

TEST_CASE("baker image of the bottom half is the left half") {
    const RectSet bottom = RectSet::from_rectangles({{Rational(0), Rational(1), Rational(0), Rational(1, 2)}});
    const RectSet left = RectSet::from_rectangles({{Rational(0), Rational(1, 2), Rational(0), Rational(1)}});
    CHECK(bottom.baker_image(1) == left);
    CHECK(bottom.baker_image(1).measure() == bottom.measure());
    CHECK(bottom.baker_image(5).baker_image(-5) == bottom);
}

TEST_CASE("binary digits address x and y consistently") {
    CHECK(RectSet::binary_digit(Rational(1, 2), 1));
    CHECK(!RectSet::binary_digit(Rational(1, 4), 1));
    CHECK(RectSet::binary_digit(Rational(1, 4), 2));
    CHECK(RectSet::binary_digit(Rational(3, 4), 1));
    CHECK(RectSet::binary_digit(Rational(3, 4), 2));
}

TEST_CASE("torus boxes intersect and rotate coordinatewise") {
    TorusBox a{{iv(Rational(0), Rational(1, 2)), iv(Rational(0), Rational(1, 4))}};
    TorusBox b{{iv(Rational(1, 4), Rational(3, 4)), iv(Rational(0), Rational(1))}};
    CHECK(a.measure() == Rational(1, 8));
    CHECK(a.intersect(b).measure() == Rational(1, 4) * Rational(1, 4));
    const TorusBox moved = a.translate_mod1({Rational(1, 2), Rational(3, 4)});
    CHECK(moved.measure() == a.measure());
    CHECK(moved.contains({Rational(3, 4), Rational(7, 8)}));
    CHECK(!moved.contains({Rational(1, 4), Rational(7, 8)}));

    const MeasurableSet ma = a, mb = b;
    CHECK_THROWS_AS(apply_op(ma, mb, SetOp::Union), std::domain_error);
    CHECK_THROWS_AS(complement(ma), std::domain_error);
}

TEST_CASE("apply_op rejects family mismatches") {
    const MeasurableSet a = iv(Rational(0), Rational(1, 2));
    const MeasurableSet b = CylinderSet::cylinder({{0, false}});
    CHECK_THROWS_AS(apply_op(a, b, SetOp::Intersect), std::invalid_argument);
}

TEST_CASE("set literal grammar round trips") {
    const IntervalSet s = parse_interval_set("0..1/4, 1/2..3/4");
    CHECK(s.piece_count() == 2);
    CHECK(s.measure() == Rational(1, 2));
    const CylinderSet c = parse_cylinder_set("{0:0,3:1}|{1:1}");
    CHECK(c.measure() == oracle::cylinder_measure_oracle(c));
    CHECK(c.measure() == Rational(5, 8));
    CHECK(parse_cylinder_set("{}") == CylinderSet::full());
    CHECK_THROWS_AS(parse_interval_set("0..1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_interval_set("nonsense"), std::invalid_argument);
}

TEST_CASE("partition entropy matches closed forms") {
    const Partition halves = Partition::from_cells(
        {iv(Rational(0), Rational(1, 2)), iv(Rational(1, 2), Rational(1))});
    CHECK(partition_entropy(halves) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const Partition single = Partition::from_cells({IntervalSet::full_unit()});
    CHECK(partition_entropy(single) == 0.0);

    const Partition mixed = Partition::from_cells({iv(Rational(0), Rational(1, 2)),
                                                   iv(Rational(1, 2), Rational(3, 4)),
                                                   iv(Rational(3, 4), Rational(1))});
    CHECK(partition_entropy(mixed) == doctest::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("partition entropy tracks a 50-digit reference on random partitions") {
    SplitMix g(99);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Rational> cuts{Rational(0), Rational(1)};
        const int k = 2 + static_cast<int>(g.next_below(6));
        for (int i = 0; i < k; ++i) cuts.push_back(Rational(g.next_below(256), 256));
        std::sort(cuts.begin(), cuts.end());
        std::vector<MeasurableSet> cells;
        std::vector<Rational> masses;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i] < cuts[i + 1]) {
                cells.push_back(iv(cuts[i], cuts[i + 1]));
                masses.push_back(cuts[i + 1] - cuts[i]);
            }
        const Partition p = Partition::from_cells(std::move(cells));
        const double h = partition_entropy(p);
        const double ref = oracle::entropy_oracle(masses);
        CHECK(std::fabs(h - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
        CHECK(h >= -1e-15);
        CHECK(h <= std::log(static_cast<double>(p.cells.size())) + 1e-12);
    }
}

TEST_CASE("partition validation catches overlap and missing mass") {
    const Partition bad_overlap = Partition{{iv(Rational(0), Rational(3, 4)),
                                             iv(Rational(1, 2), Rational(1))}};
    CHECK_THROWS_AS(bad_overlap.validate(Rational(5, 4)), std::invalid_argument);
    CHECK_THROWS_AS(bad_overlap.validate(Rational(1)), std::invalid_argument);
    const Partition short_mass = Partition{{iv(Rational(0), Rational(1, 2))}};
    CHECK_THROWS_AS(short_mass.validate(Rational(1)), std::invalid_argument);
    Partition::from_cells({iv(Rational(0), Rational(1, 2)), iv(Rational(1, 2), Rational(1))})
        .validate(Rational(1));
}

TEST_CASE("join refines and is idempotent on equal partitions") {
    const Partition halves = Partition::from_cells(
        {iv(Rational(0), Rational(1, 2)), iv(Rational(1, 2), Rational(1))});
    const Partition self = join(halves, halves);
    CHECK(sorted_measures(self) == sorted_measures(halves));

    const Partition quarter = Partition::from_cells(
        {iv(Rational(0), Rational(1, 4)), iv(Rational(1, 4), Rational(1))});
    const Partition j = join(halves, quarter);
    const std::vector<Rational> expect{Rational(1, 4), Rational(1, 4), Rational(1, 2)};
    CHECK(sorted_measures(j) == expect);
    CHECK(partition_entropy(j) <= partition_entropy(halves) + partition_entropy(quarter) + 1e-12);
}

TEST_CASE("join of coordinate partitions gives four quarter cells") {
    const Partition p0 = Partition::from_cells({CylinderSet::cylinder({{0, false}}),
                                                CylinderSet::cylinder({{0, true}})});
    const Partition p1 = Partition::from_cells({CylinderSet::cylinder({{1, false}}),
                                                CylinderSet::cylinder({{1, true}})});
    const Partition j = join(p0, p1);
    REQUIRE(j.cells.size() == 4);
    for (const auto& c : j.cells) CHECK(measure(c) == Rational(1, 4));
}

TEST_CASE("join associativity on cell measures") {
    const Partition a = Partition::from_cells(
        {iv(Rational(0), Rational(1, 2)), iv(Rational(1, 2), Rational(1))});
    const Partition b = Partition::from_cells(
        {iv(Rational(0), Rational(1, 3)), iv(Rational(1, 3), Rational(1))});
    const Partition c = Partition::from_cells(
        {iv(Rational(0), Rational(1, 5)), iv(Rational(1, 5), Rational(4, 5)),
         iv(Rational(4, 5), Rational(1))});
    CHECK(sorted_measures(join(join(a, b), c)) == sorted_measures(join(a, join(b, c))));
}

TEST_CASE("join enforces the cell cap") {
    std::vector<MeasurableSet> cells;
    for (int i = 0; i < 8; ++i) cells.push_back(iv(Rational(i, 8), Rational(i + 1, 8)));
    const Partition p = Partition::from_cells(cells);
    CHECK_THROWS_AS(join(p, p, 4), ResourceError);
}
