#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ergolab {

// Thrown when an iterative computation hits its configured budget (stage cap,
// cell cap, step budget) before reaching the requested tolerance. Carries the
// best rigorous enclosure obtained so far, when one exists.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
    ResourceError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), bounds_(std::make_pair(lo, hi)) {}

    const std::optional<std::pair<double, double>>& best_bounds() const { return bounds_; }

private:
    std::optional<std::pair<double, double>> bounds_;
};

} // namespace ergolab
