#pragma once

#include "ergolab/set_ops.hpp"

#include <cstddef>
#include <vector>

namespace ergolab {

// Finite measurable partition: pairwise disjoint cells of one set family.
// Zero-measure cells are dropped on construction.
struct Partition {
    std::vector<MeasurableSet> cells;

    static Partition from_cells(std::vector<MeasurableSet> cells);

    Rational total_measure() const;
    // Pairwise disjointness plus total mass == expected. Quadratic; meant for
    // input validation and tests, not hot paths.
    void validate(const Rational& expected_total) const;
};

// Shannon entropy -sum mu ln mu in nats from the exact cell measures.
// Compensated long double accumulation keeps the relative error near 1e-15
// even for joins with ~2^20 cells.
double partition_entropy(const Partition& p);

// Common refinement. Throws ResourceError when the cell count would exceed
// cell_cap.
Partition join(const Partition& p, const Partition& q, std::size_t cell_cap = (1u << 20));

} // namespace ergolab
