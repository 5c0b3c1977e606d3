#include "ergolab/partition.hpp"

#include "ergolab/errors.hpp"

#include <stdexcept>
#include <string>

namespace ergolab {

Partition Partition::from_cells(std::vector<MeasurableSet> cells) {
    Partition p;
    p.cells.reserve(cells.size());
    for (auto& c : cells) {
        if (is_empty(c) || measure(c) == 0) continue;
        p.cells.push_back(std::move(c));
    }
    if (p.cells.empty()) throw std::invalid_argument("partition has no cells of positive measure");
    return p;
}

Rational Partition::total_measure() const {
    Rational total(0);
    for (const auto& c : cells) total += measure(c);
    return total;
}

void Partition::validate(const Rational& expected_total) const {
    if (total_measure() != expected_total)
        throw std::invalid_argument("partition cells do not cover the space: total " +
                                    rational_str(total_measure()) + " expected " +
                                    rational_str(expected_total));
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j)
            if (measure(apply_op(cells[i], cells[j], SetOp::Intersect)) != 0)
                throw std::invalid_argument("partition cells " + std::to_string(i) + " and " +
                                            std::to_string(j) + " overlap");
}

double partition_entropy(const Partition& p) {
    long double sum = 0.0L;
    long double comp = 0.0L;
    for (const auto& c : p.cells) {
        const Rational mu = measure(c);
        if (mu == 0) continue;
        const long double term =
            -static_cast<long double>(to_double(mu)) * static_cast<long double>(log_rational(mu));
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return static_cast<double>(sum);
}

Partition join(const Partition& p, const Partition& q, std::size_t cell_cap) {
    std::vector<MeasurableSet> cells;
    for (const auto& a : p.cells) {
        for (const auto& b : q.cells) {
            MeasurableSet c = apply_op(a, b, SetOp::Intersect);
            if (is_empty(c) || measure(c) == 0) continue;
            cells.push_back(std::move(c));
            if (cells.size() > cell_cap)
                throw ResourceError("join exceeds cell cap " + std::to_string(cell_cap));
        }
    }
    Partition out;
    out.cells = std::move(cells);
    return out;
}

} // namespace ergolab
