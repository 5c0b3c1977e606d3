#include "ergolab/poisson.hpp"

#include "ergolab/errors.hpp"
#include "ergolab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace ergolab {

double poisson_pmf(double lambda, int k) {
    double p = std::exp(-lambda);
    for (int t = 1; t <= k; ++t) p *= lambda / t;
    return p;
}

namespace {

// A counted set must lie inside the sampling window [0, m_J).
IntervalSet window_checked(const RankOne& eng, int window_stage, const LevelSet& a) {
    const IntervalSet iv = eng.to_intervals(a);
    const Rational m = eng.mass(window_stage);
    if (!iv.pieces().empty() && iv.pieces().back().second > m)
        throw std::domain_error("set extends beyond the sampling window");
    return iv;
}

} // namespace

PointConfiguration sample_configuration(const RankOne& eng, int window_stage,
                                        std::uint64_t seed) {
    const Rational m = eng.mass(window_stage);
    const double lambda = to_double(m);
    SplitMix rng(seed);

    // count by CDF inversion
    const double u = rng.next_unit();
    int count = 0;
    double p = std::exp(-lambda);
    double cdf = p;
    const int cap = static_cast<int>(lambda + 40.0 * std::sqrt(lambda + 1.0) + 60.0);
    while (u >= cdf && count < cap) {
        ++count;
        p *= lambda / count;
        cdf += p;
    }

    PointConfiguration cfg;
    cfg.seed = seed;
    cfg.points.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
        const std::uint64_t raw = rng.next();
        cfg.points.push_back(m * Rational(BigInt(raw), BigInt(1) << 64));
    }
    return cfg;
}

int count_in(const RankOne& eng, int window_stage, const PointConfiguration& config,
             const IntervalSet& target, std::int64_t time_shift) {
    int hits = 0;
    for (const auto& pt : config.points) {
        const Rational moved =
            time_shift == 0 ? pt : eng.transform_point(window_stage, pt, time_shift);
        if (target.contains(moved)) ++hits;
    }
    return hits;
}

PmfReport count_distribution(const RankOne& eng, int window_stage, const LevelSet& a,
                             int batches, std::uint64_t seed) {
    if (batches < 1) throw std::invalid_argument("need at least one batch");
    const IntervalSet target = window_checked(eng, window_stage, a);
    const double mu = to_double(Rational(a.count()) * eng.width(a.stage));

    std::map<int, int> histogram;
    int max_k = 0;
    for (int b = 0; b < batches; ++b) {
        const PointConfiguration cfg = sample_configuration(eng, window_stage, mix64(seed, b));
        const int c = count_in(eng, window_stage, cfg, target);
        histogram[c] += 1;
        max_k = std::max(max_k, c);
    }
    // include reference rows beyond the largest observed count while they
    // still carry visible mass
    while (poisson_pmf(mu, max_k + 1) > 1e-6 && max_k < 64) ++max_k;

    PmfReport rep;
    rep.lambda = mu;
    rep.batches = batches;
    rep.seed = seed;
    const double n = static_cast<double>(batches);
    for (int k = 0; k <= max_k; ++k) {
        PmfRow row;
        row.k = k;
        auto it = histogram.find(k);
        row.empirical = it == histogram.end() ? 0.0 : it->second / n;
        row.reference = poisson_pmf(mu, k);
        row.sigma = std::sqrt(row.reference * (1.0 - row.reference) / n);
        if (row.reference > 1e-9)
            rep.chi_square +=
                (row.empirical - row.reference) * (row.empirical - row.reference) * n /
                row.reference;
        rep.rows.push_back(row);
    }
    return rep;
}

IndependenceReport independence_check(const RankOne& eng, int window_stage, const LevelSet& a,
                                      const LevelSet& b, std::int64_t shift, int batches,
                                      std::uint64_t seed) {
    if (batches < 1) throw std::invalid_argument("need at least one batch");
    IndependenceReport rep;
    rep.batches = batches;
    rep.seed = seed;

    // The two counted targets are A and T^-shift B; their overlap has the
    // measure of T^shift A cap B. Certify exact disjointness before sampling.
    const MeetBounds mb = eng.shifted_meet(a, b, BigInt(shift));
    rep.translate_disjoint = (mb.hi == 0);
    if (!rep.translate_disjoint)
        throw std::domain_error("independence requires certified disjoint targets");

    const IntervalSet ta = window_checked(eng, window_stage, a);
    const IntervalSet tb = window_checked(eng, window_stage, b);
    const auto clamp_class = [](int c) { return c >= 2 ? 2 : c; };

    int class_a[3] = {0, 0, 0};
    int class_b[3] = {0, 0, 0};
    int joint[3][3] = {};
    double sum_a = 0, sum_b = 0, sum_aa = 0, sum_bb = 0, sum_ab = 0;
    for (int batch = 0; batch < batches; ++batch) {
        const PointConfiguration cfg =
            sample_configuration(eng, window_stage, mix64(seed, batch));
        const int ca = count_in(eng, window_stage, cfg, ta);
        const int cb = count_in(eng, window_stage, cfg, tb, shift);
        class_a[clamp_class(ca)] += 1;
        class_b[clamp_class(cb)] += 1;
        joint[clamp_class(ca)][clamp_class(cb)] += 1;
        sum_a += ca;
        sum_b += cb;
        sum_aa += static_cast<double>(ca) * ca;
        sum_bb += static_cast<double>(cb) * cb;
        sum_ab += static_cast<double>(ca) * cb;
    }

    const double n = static_cast<double>(batches);
    rep.pass = true;
    for (int ka = 0; ka < 3; ++ka) {
        for (int kb = 0; kb < 3; ++kb) {
            IndependenceCell cell;
            cell.ka = ka;
            cell.kb = kb;
            cell.joint = joint[ka][kb] / n;
            cell.product = (class_a[ka] / n) * (class_b[kb] / n);
            cell.gap = std::abs(cell.joint - cell.product);
            cell.sigma = std::sqrt(std::max(cell.product * (1.0 - cell.product), 1e-12) / n);
            cell.pass = cell.gap <= 4.0 * cell.sigma;
            rep.pass = rep.pass && cell.pass;
            rep.cells.push_back(cell);
        }
    }

    const double var_a = sum_aa / n - (sum_a / n) * (sum_a / n);
    const double var_b = sum_bb / n - (sum_b / n) * (sum_b / n);
    const double cov = sum_ab / n - (sum_a / n) * (sum_b / n);
    rep.count_correlation =
        (var_a > 0 && var_b > 0) ? cov / std::sqrt(var_a * var_b) : 0.0;
    return rep;
}

SuspensionEntropyReport suspension_progression_entropy(const RankOne& eng, int window_stage,
                                                       const LevelSet& a, int j,
                                                       std::int64_t big_l, int batches,
                                                       std::uint64_t seed) {
    if (batches < 1) throw std::invalid_argument("need at least one batch");
    if (j < 1 || big_l < 1) throw std::invalid_argument("progression needs j >= 1 and L >= 1");
    (void)window_checked(eng, window_stage, a);
    const double mu = to_double(Rational(a.count()) * eng.width(a.stage));

    // the progression steps by the stage-j height
    const BigInt h = eng.height(j);

    // All translates A, T^{h_j}A, ..., T^{L h_j}A must be pairwise disjoint
    // for the product structure the estimate relies on; certify exactly.
    for (std::int64_t d = 1; d <= big_l; ++d) {
        const MeetBounds mb = eng.shifted_meet(a, a, BigInt(d) * h);
        if (mb.hi != 0)
            throw std::domain_error(
                "progression translates not certifiably disjoint at this (j, L)");
    }

    // Materialize each translate T^{t h_j}A exactly: refine A to a stage
    // whose column holds the whole shifted orbit, then shift level indices.
    // Every translate must stay inside the sampling window for the counts to
    // be the suspension counts.
    const Rational window_mass = eng.mass(window_stage);
    std::vector<IntervalSet> translates;
    for (std::int64_t t = 1; t <= big_l; ++t) {
        const BigInt delta = BigInt(t) * h;
        int stage = std::max(a.stage, window_stage);
        LevelSet refined = eng.refine(a, stage);
        while (refined.runs.back().second + delta > eng.height(stage)) {
            ++stage;
            if (stage > a.stage + 40)
                throw ResourceError("translate does not settle inside one column");
            refined = eng.refine(refined, stage);
        }
        const LevelSet moved = LevelSet::from_runs(
            stage, [&] {
                auto runs = refined.runs;
                for (auto& r : runs) {
                    r.first += delta;
                    r.second += delta;
                }
                return runs;
            }());
        const IntervalSet iv = eng.to_intervals(moved);
        if (!iv.pieces().empty() && iv.pieces().back().second > window_mass)
            throw std::domain_error("progression translate leaves the sampling window");
        translates.push_back(iv);
    }

    const auto clamp_class = [](int c) { return c >= 2 ? 2 : c; };
    std::map<std::vector<int>, int> joint;
    std::vector<std::map<int, int>> marginals(static_cast<std::size_t>(big_l));
    for (int batch = 0; batch < batches; ++batch) {
        const PointConfiguration cfg =
            sample_configuration(eng, window_stage, mix64(seed, batch));
        std::vector<int> word;
        word.reserve(static_cast<std::size_t>(big_l));
        for (std::int64_t t = 1; t <= big_l; ++t) {
            const int c =
                clamp_class(count_in(eng, window_stage, cfg, translates[static_cast<std::size_t>(t - 1)]));
            word.push_back(c);
            marginals[static_cast<std::size_t>(t - 1)][c] += 1;
        }
        joint[word] += 1;
    }

    const double n = static_cast<double>(batches);
    const auto plugin = [n](const auto& hist) {
        double h = 0;
        for (const auto& [key, cnt] : hist) {
            const double p = cnt / n;
            if (p > 0) h -= p * std::log(p);
        }
        return h;
    };

    SuspensionEntropyReport rep;
    rep.batches = batches;
    rep.seed = seed;
    rep.empirical_h = plugin(joint) / static_cast<double>(big_l);
    for (const auto& m : marginals) rep.marginal_h.push_back(plugin(m));
    const double p0 = poisson_pmf(mu, 0);
    const double p1 = poisson_pmf(mu, 1);
    const double p2 = std::max(0.0, 1.0 - p0 - p1);
    double ref = 0;
    for (const double p : {p0, p1, p2})
        if (p > 0) ref -= p * std::log(p);
    rep.reference_h = ref;
    return rep;
}

} // namespace ergolab
