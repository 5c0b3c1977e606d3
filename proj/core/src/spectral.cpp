#include "ergolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace ergolab {

namespace {

// Deterministic chunked parallel map: out[i] = fn(i). Results are identical
// for any thread count because every index computes independently.
void parallel_fill(std::vector<double>& out, int threads,
                   const std::function<double(std::size_t)>& fn) {
    const std::size_t n = out.size();
    const int use = std::max(1, threads);
    if (use == 1 || n < 1024) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + use - 1) / use;
    for (int t = 0; t < use; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

Autocovariance autocovariance(const System& sys, const StepFunction& f, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("autocovariance needs max_lag >= 0");
    if (f.terms.empty()) throw std::invalid_argument("step function has no terms");
    Autocovariance out;
    out.mean = f.mean_raw();
    const Rational mean_sq = out.mean * out.mean;
    out.sigma.reserve(static_cast<std::size_t>(max_lag) + 1);
    for (int i = 0; i <= max_lag; ++i) {
        Rational s(0);
        for (const auto& [qk, sk] : f.terms) {
            const MeasurableSet moved = sys.image(sk, i);
            for (const auto& [ql, sl] : f.terms)
                s += qk * ql * measure(apply_op(moved, sl, SetOp::Intersect));
        }
        out.sigma.push_back(s - mean_sq);
    }
    return out;
}

std::vector<double> fejer_density(const Autocovariance& ac, int grid_size, int threads) {
    if (grid_size < 1) throw std::invalid_argument("grid size must be >= 1");
    if (ac.sigma.empty()) throw std::domain_error("autocovariance carries no lags");
    const int n = static_cast<int>(ac.sigma.size()); // kernel order
    std::vector<double> coeff(ac.sigma.size());
    for (std::size_t d = 0; d < ac.sigma.size(); ++d) {
        const double w = 1.0 - static_cast<double>(d) / static_cast<double>(n);
        coeff[d] = (d == 0 ? 1.0 : 2.0 * w) * to_double(ac.sigma[d]);
    }
    std::vector<double> rho(static_cast<std::size_t>(grid_size));
    parallel_fill(rho, threads, [&](std::size_t m) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(grid_size);
        // Accumulate cos(d theta) by rotation to avoid grid_size * n trig calls.
        const std::complex<double> w(std::cos(theta), std::sin(theta));
        std::complex<double> z(1.0, 0.0);
        double acc = coeff[0];
        for (std::size_t d = 1; d < coeff.size(); ++d) {
            z *= w;
            acc += coeff[d] * z.real();
        }
        return acc;
    });
    return rho;
}

double wiener_atom(const Autocovariance& ac, double angle) {
    const int n = ac.max_lag();
    if (n < 1) throw std::invalid_argument("wiener average needs at least one positive lag");
    const std::complex<double> w(std::cos(-angle), std::sin(-angle));
    std::complex<double> z(1.0, 0.0);
    std::complex<double> acc(0.0, 0.0);
    for (int i = 1; i <= n; ++i) {
        z *= w;
        acc += to_double(ac.sigma[static_cast<std::size_t>(i)]) * z;
    }
    return std::abs(acc) / static_cast<double>(n);
}

EigenScanResult eigen_scan(const Autocovariance& ac, int grid_size, double threshold,
                           int merge_radius, int threads) {
    if (grid_size < 4) throw std::invalid_argument("grid size must be >= 4");
    const int n = ac.max_lag();
    if (n < 1) throw std::invalid_argument("scan needs at least one positive lag");
    EigenScanResult res;
    res.threshold = threshold;
    res.merge_radius = merge_radius > 0
                           ? merge_radius
                           : std::max(1, static_cast<int>(std::ceil(2.0 * grid_size / n)));
    res.closure_tol = (res.merge_radius + 1) * 2.0 * std::numbers::pi / grid_size;

    std::vector<double> stat(static_cast<std::size_t>(grid_size));
    parallel_fill(stat, threads, [&](std::size_t m) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(grid_size);
        return wiener_atom(ac, theta);
    });

    std::vector<int> hits;
    for (int m = 0; m < grid_size; ++m)
        if (stat[static_cast<std::size_t>(m)] >= threshold) hits.push_back(m);
    if (hits.empty()) {
        res.closed = true; // no pairs to refute closure
        return res;
    }

    // chain hits within merge_radius steps; handle circular wraparound by
    // joining the first and last clusters when they touch across 0
    std::vector<std::pair<int, int>> clusters; // [first_hit_idx, last_hit_idx] into hits
    clusters.emplace_back(0, 0);
    for (std::size_t t = 1; t < hits.size(); ++t) {
        if (hits[t] - hits[clusters.back().second] <= res.merge_radius)
            clusters.back().second = static_cast<int>(t);
        else
            clusters.emplace_back(static_cast<int>(t), static_cast<int>(t));
    }
    bool wrapped = false;
    if (clusters.size() > 1) {
        const int gap = hits[clusters.front().first] + grid_size - hits[clusters.back().second];
        if (gap <= res.merge_radius) wrapped = true;
    }

    const auto peak_of = [&](int from, int to, bool with_wrap) {
        int best = hits[from];
        for (int t = from; t <= to; ++t)
            if (stat[hits[t]] > stat[best]) best = hits[t];
        if (with_wrap) {
            const auto& frontc = clusters.front();
            for (int t = frontc.first; t <= frontc.second; ++t)
                if (stat[hits[t]] > stat[best]) best = hits[t];
        }
        return best;
    };

    const std::size_t begin = wrapped ? 1 : 0;
    std::vector<int> peaks;
    for (std::size_t c = begin; c < clusters.size(); ++c) {
        const bool with_wrap = wrapped && c + 1 == clusters.size();
        peaks.push_back(peak_of(clusters[c].first, clusters[c].second, with_wrap));
    }
    std::sort(peaks.begin(), peaks.end());
    for (const int m : peaks) {
        SpectralAtom atom;
        atom.angle = 2.0 * std::numbers::pi * static_cast<double>(m) / grid_size;
        atom.mass = stat[static_cast<std::size_t>(m)];
        res.atoms.push_back(atom);
    }

    // closure: sum of any two detected angles must again be within tolerance
    // of a detected angle or of zero (mod 2 pi)
    const double two_pi = 2.0 * std::numbers::pi;
    res.closed = true;
    for (const auto& a : res.atoms) {
        for (const auto& b : res.atoms) {
            double s = std::fmod(a.angle + b.angle, two_pi);
            bool ok = s <= res.closure_tol || two_pi - s <= res.closure_tol;
            for (const auto& c : res.atoms) {
                const double d = std::abs(s - c.angle);
                if (std::min(d, two_pi - d) <= res.closure_tol) ok = true;
            }
            if (!ok) {
                res.closed = false;
                break;
            }
        }
        if (!res.closed) break;
    }
    return res;
}

} // namespace ergolab
