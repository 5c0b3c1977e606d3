#pragma once

#include "ergolab/system.hpp"

#include <vector>

namespace ergolab {

// Centered autocovariance of a step function along the dynamics:
// sigma(i) = sum_{k,l} q_k q_l mu(T^i S_k cap S_l) - (sum_k q_k mu(S_k))^2,
// exact, for i = 0..N.
struct Autocovariance {
    std::vector<Rational> sigma;
    Rational mean{0}; // raw mean of f before centering

    int max_lag() const { return static_cast<int>(sigma.size()) - 1; }
};

Autocovariance autocovariance(const System& sys, const StepFunction& f, int max_lag);

// Fejer-smoothed spectral density on the uniform grid theta_m = 2 pi m / M:
// rho(theta) = sigma(0) + 2 sum_{d=1}^{N-1} (1 - d/N) sigma(d) cos(d theta),
// where N = max_lag + 1. Nonnegative up to rounding; grid mean equals
// sigma(0) whenever M exceeds the kernel order.
std::vector<double> fejer_density(const Autocovariance& ac, int grid_size, int threads = 1);

// One-sided Wiener average (1/N) |sum_{i=1}^{N} sigma(i) e^{-i angle i}|;
// converges to the spectral mass of the atom at the angle.
double wiener_atom(const Autocovariance& ac, double angle);

struct SpectralAtom {
    double angle = 0; // in [0, 2 pi)
    double mass = 0;
};

struct EigenScanResult {
    std::vector<SpectralAtom> atoms;
    bool closed = false;     // detected angles closed under addition mod 2 pi
    double threshold = 0;
    int merge_radius = 0;
    double closure_tol = 0;
};

// Evaluates the Wiener statistic at every grid angle, keeps points above
// threshold, chains hits within merge_radius grid steps (with wraparound)
// into clusters, and reports each cluster's peak. merge_radius <= 0 selects
// the default max(1, ceil(2 M / N)).
EigenScanResult eigen_scan(const Autocovariance& ac, int grid_size, double threshold = 0.005,
                           int merge_radius = 0, int threads = 1);

} // namespace ergolab
