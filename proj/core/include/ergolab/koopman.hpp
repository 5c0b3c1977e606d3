#pragma once

#include "ergolab/rank_one.hpp"
#include "ergolab/system.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ergolab {

// Correlation values c_i = mu(T^i A cap B) for a contiguous lag range, as
// exact values or rigorous enclosures (rank-one resolution).
struct CorrelationSeries {
    std::int64_t first = 0;
    std::vector<std::pair<Rational, Rational>> values;
    bool exact = true;
    Rational mu_a{0};
    Rational mu_b{0};
    // Total mass of the ambient space (1 for probability systems, the
    // certified tower-mass midpoint for finite rank-one constructions).
    Rational ambient{1};

    std::int64_t last() const { return first + static_cast<std::int64_t>(values.size()) - 1; }
    const std::pair<Rational, Rational>& at(std::int64_t lag) const;
    double mid(std::int64_t lag) const;
};

CorrelationSeries correlation_series(const System& sys, const MeasurableSet& a,
                                     const MeasurableSet& b, std::int64_t lo, std::int64_t hi);

CorrelationSeries correlation_series(const RankOne& eng, const LevelSet& a, const LevelSet& b,
                                     std::int64_t lo, std::int64_t hi,
                                     std::optional<Rational> tol = std::nullopt,
                                     int stage_cap = 24);

// Running averages of normalized correlations against the product value:
// avg_N = (1/N) sum_{i=1..N} c_i / ambient, and the mean absolute deviation
// from target = mu(A) mu(B) / ambient^2 (or a caller-supplied target).
struct CesaroDiagnostics {
    std::vector<double> avg;
    std::vector<double> absdev;
    double target = 0;
};

CesaroDiagnostics cesaro_diagnostics(const CorrelationSeries& series,
                                     std::optional<double> target = std::nullopt);

// Least-squares fit of U^n by a convex combination of the projector onto
// constants (theta) and powers U^k, matched on a family of test pairs.
struct WeakLimitFit {
    std::int64_t n = 0;
    std::vector<std::int64_t> basis;
    // parallel to {theta} + basis; zero for inactive columns
    std::vector<double> coefficients;
    double residual = 0; // sum of squared errors over the pairs
    std::string status;  // "ok" or "degenerate"
};

WeakLimitFit fit_weak_limit(const System& sys,
                            const std::vector<std::pair<MeasurableSet, MeasurableSet>>& pairs,
                            std::int64_t n, const std::vector<std::int64_t>& basis);

WeakLimitFit fit_weak_limit(const RankOne& eng,
                            const std::vector<std::pair<LevelSet, LevelSet>>& pairs,
                            std::int64_t n, const std::vector<std::int64_t>& basis,
                            std::optional<Rational> tol = std::nullopt, int stage_cap = 24);

// Shared solver: minimize |X a - y|^2 over the probability simplex by
// enumerating active sets (KKT solve per support, ascending mask order keeps
// ties deterministic). Column 0 of X is the theta column.
WeakLimitFit fit_simplex_least_squares(const std::vector<std::vector<double>>& x_rows,
                                       const std::vector<double>& y, std::int64_t n,
                                       const std::vector<std::int64_t>& basis);

// i-th member (i >= 1) of the canonical dyadic family for a set family:
// level n = floor(log2(i+1)) and position k = i+1-2^n give the k-th dyadic
// piece of generation n (intervals, coordinate words, coded squares, boxes).
MeasurableSet canonical_member(SetFamily fam, int torus_dims, int index);
std::vector<MeasurableSet> canonical_family(const System& sys, int depth);

struct MetricReport {
    double value = 0;
    double tail_bound = 0;
    int depth = 0;
};

// Metric on transformations: sum_i 2^-i [mu(S A_i symdiff T A_i) +
// mu(S^-1 A_i symdiff T^-1 A_i)] over the canonical family.
MetricReport halmos_distance(const System& s, const System& t, int depth);

// Reference to one side of a weak-operator comparison: a power of the
// system's operator, or the projector onto constants.
struct OperatorRef {
    bool theta = false;
    std::int64_t exponent = 1;
    static OperatorRef power(std::int64_t n) { return {false, n}; }
    static OperatorRef projector() { return {true, 0}; }
};

// Weak-operator gap sum_{i,j<=depth} 2^{-i-j} |<(U - V) chi_Ai, chi_Aj>|
// with pairings mu(T^n A_i cap A_j) (or mu(A_i) mu(A_j) for theta).
MetricReport weak_distance(const System& u, OperatorRef ru, const System& v, OperatorRef rv,
                           int depth);

} // namespace ergolab
