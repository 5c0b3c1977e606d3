#pragma once

#include "ergolab/rank_one.hpp"
#include "ergolab/spectral.hpp"
#include "ergolab/system.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ergolab {

// Orbit averages (1/N) sum_{i=1..N} 1_A(T^i x), exact.
struct BirkhoffReport {
    std::vector<bool> visits;        // 1_A(T^i x), i = 1..N
    std::vector<Rational> averages;  // running averages
    Rational final_average{0};
};

BirkhoffReport birkhoff_average(const System& sys, const MeasurableSet& a, const Point& x,
                                std::int64_t n);

// L2 norm of the ergodic average of the centered function:
// | (1/N) sum_{i=1..N} U^i f |_2 =
// sqrt( (1/N^2) [ N sigma(0) + sum_{d=1}^{N-1} 2 (N-d) sigma(d) ] ).
double vn_norm(const Autocovariance& ac, int n);

// Multiple recurrence terms mu(A_0 cap T^i A_1 cap T^{2i} A_2 cap ...) and
// their running averages.
struct MultiRecReport {
    std::vector<std::pair<Rational, Rational>> terms; // enclosure per i = 1..N
    std::vector<double> averages;                     // running averages of midpoints
    bool exact = true;
};

MultiRecReport multirec(const System& sys, const std::vector<MeasurableSet>& sets,
                        std::int64_t n);

// Rank-one variant: explicit run-list refinement bounds each term.
MultiRecReport multirec_rank_one(const RankOne& eng, const std::vector<LevelSet>& sets,
                                 std::int64_t n, int stage_cap = 24);

// First return-progression witness: smallest i <= i_max with
// mu(A cap T^i A cap T^{2i} A) > 0.
struct RothReport {
    bool found = false;
    std::int64_t witness_i = 0;
    Rational witness_measure{0};
    // per i: mu(A cap T^i A), mu(A cap T^i A cap T^{2i} A)
    std::vector<std::pair<Rational, Rational>> table;
};

RothReport roth_witness(const System& sys, const MeasurableSet& a, std::int64_t i_max);

// Smallest n > n_floor with S_n = sum_{i=0}^{n-1} f(T^i x) equal to zero,
// within the step budget. f must be integer-valued with zero mean over
// pairwise disjoint pieces. Returns nullopt when the budget runs out.
std::optional<std::int64_t> cocycle_first_zero(const System& sys, const StepFunction& f,
                                               const Point& x, std::int64_t n_floor,
                                               std::int64_t budget = 1000000);

} // namespace ergolab
