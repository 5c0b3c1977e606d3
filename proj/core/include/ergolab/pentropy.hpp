#pragma once

#include "ergolab/partition.hpp"
#include "ergolab/rank_one.hpp"
#include "ergolab/system.hpp"

#include <cstdint>
#include <vector>

namespace ergolab {

// Entropy along an arithmetic progression of times: (1/L) H of the join of
// T^{j t} xi over t = 1..L, natural log.
double progression_entropy(const System& sys, const Partition& xi, int j, std::int64_t big_l,
                           std::size_t cell_cap = (1u << 20));

struct EntropyProfilePoint {
    int j = 0;
    std::int64_t big_l = 0;
    double h_lo = 0;
    double h_hi = 0; // equal to h_lo for exact systems
};

// Profile over j = 1..j_max with a per-j progression length.
std::vector<EntropyProfilePoint> entropy_profile(const System& sys, const Partition& xi,
                                                 int j_max,
                                                 const std::vector<std::int64_t>& lengths,
                                                 std::size_t cell_cap = (1u << 20));

// Largest h over the computed range (finite stand-in for the limsup).
double profile_limsup(const std::vector<EntropyProfilePoint>& profile);

// Rank-one variant. xi partitions the stage-(xi[0].stage) tower base into
// level sets. The join is resolved on the sub-tower where all shifted
// refinements are defined; the unresolved mass delta enters as one extra
// outcome, and the enclosure width is the entropy-perturbation bound
// H_b(delta) + delta ln(K) for K possible outcomes.
EntropyProfilePoint progression_entropy_rank_one(const RankOne& eng,
                                                 const std::vector<LevelSet>& xi, int j,
                                                 std::int64_t big_l,
                                                 std::size_t cell_cap = (1u << 20),
                                                 int stage_cap = 24);

std::vector<EntropyProfilePoint> entropy_profile_rank_one(
    const RankOne& eng, const std::vector<LevelSet>& xi, int j_max,
    const std::vector<std::int64_t>& lengths, std::size_t cell_cap = (1u << 20),
    int stage_cap = 24);

} // namespace ergolab
