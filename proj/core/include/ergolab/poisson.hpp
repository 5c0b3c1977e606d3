#pragma once

#include "ergolab/rank_one.hpp"

#include <cstdint>
#include <vector>

namespace ergolab {

// One sampled configuration of the Poisson point process over the stage-J
// tower with intensity 1 (so the total count is Poisson of the tower mass).
// Positions are exact dyadic multiples of the tower mass, so membership
// queries are exact and runs are byte-reproducible for a fixed seed.
struct PointConfiguration {
    std::uint64_t seed = 0;
    std::vector<Rational> points;
};

PointConfiguration sample_configuration(const RankOne& eng, int window_stage,
                                        std::uint64_t seed);

// Number of configuration points whose image under T^time_shift lies in the
// target intervals (counting in T^s x equals counting x in T^-s A).
int count_in(const RankOne& eng, int window_stage, const PointConfiguration& config,
             const IntervalSet& target, std::int64_t time_shift = 0);

struct PmfRow {
    int k = 0;
    double empirical = 0;
    double reference = 0;
    double sigma = 0; // sqrt(p (1-p) / n) at the reference p
};

struct PmfReport {
    std::vector<PmfRow> rows;
    double chi_square = 0;
    double lambda = 0; // reference mean = mu(A)
    int batches = 0;
    std::uint64_t seed = 0;
};

// Empirical distribution of the count in A over seeded batches against the
// Poisson reference. Batch b uses seed mix64(seed, b).
PmfReport count_distribution(const RankOne& eng, int window_stage, const LevelSet& a,
                             int batches, std::uint64_t seed);

struct IndependenceCell {
    int ka = 0;          // count class on A: 0, 1, or >=2
    int kb = 0;
    double joint = 0;    // empirical P(class(A)=ka and class(B)=kb)
    double product = 0;  // empirical P(class(A)=ka) * P(class(B)=kb)
    double gap = 0;      // |joint - product|
    double sigma = 0;    // sqrt(product (1 - product) / n)
    bool pass = false;   // gap <= 4 sigma
};

struct IndependenceReport {
    std::vector<IndependenceCell> cells; // all nine class pairs
    bool pass = false;                   // every cell passes
    double count_correlation = 0;        // sample correlation of the raw counts
    int batches = 0;
    std::uint64_t seed = 0;
    bool translate_disjoint = false; // certified mu(A cap T^-shift B) == 0
};

// Checks product behavior of the count classes {0, 1, >=2} on A and on
// T^-shift B over all nine class pairs. Disjointness of the two target sets
// is certified exactly via shifted_meet before sampling; overlap is a
// domain_error (the product law needs disjoint targets).
IndependenceReport independence_check(const RankOne& eng, int window_stage, const LevelSet& a,
                                      const LevelSet& b, std::int64_t shift, int batches,
                                      std::uint64_t seed);

struct SuspensionEntropyReport {
    double empirical_h = 0;   // joint plugin entropy of the word / L
    double reference_h = 0;   // entropy of one independent Poisson class triple
    std::vector<double> marginal_h; // per-step plugin entropies
    int batches = 0;
    std::uint64_t seed = 0;
};

// Entropy along the suspension progression with steps h_j (j a stage index):
// per configuration the word (class of count in T^{-t h_j} A)_{t=1..L} with
// classes {0, 1, >=2}. The translates A, T^{h_j}A, ..., T^{L h_j}A must be
// certifiably pairwise disjoint (checked exactly, domain_error otherwise);
// the counts are then i.i.d. Poisson(mu(A)) and the normalized joint entropy
// approaches the one-step class entropy (the plugin estimate is biased low,
// never high, in expectation).
SuspensionEntropyReport suspension_progression_entropy(const RankOne& eng, int window_stage,
                                                       const LevelSet& a, int j,
                                                       std::int64_t big_l, int batches,
                                                       std::uint64_t seed);

// Poisson pmf value e^-lambda lambda^k / k!.
double poisson_pmf(double lambda, int k);

} // namespace ergolab
