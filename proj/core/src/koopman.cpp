#include "ergolab/koopman.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ergolab {

const std::pair<Rational, Rational>& CorrelationSeries::at(std::int64_t lag) const {
    if (lag < first || lag > last()) throw std::out_of_range("lag outside series range");
    return values[static_cast<std::size_t>(lag - first)];
}

double CorrelationSeries::mid(std::int64_t lag) const {
    const auto& v = at(lag);
    return to_double((v.first + v.second) / 2);
}

CorrelationSeries correlation_series(const System& sys, const MeasurableSet& a,
                                     const MeasurableSet& b, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("empty lag range");
    CorrelationSeries out;
    out.first = lo;
    out.exact = true;
    out.mu_a = measure(a);
    out.mu_b = measure(b);
    out.ambient = Rational(1);
    out.values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) {
        Rational c = sys.correlation(a, b, n);
        out.values.emplace_back(c, c);
    }
    return out;
}

CorrelationSeries correlation_series(const RankOne& eng, const LevelSet& a, const LevelSet& b,
                                     std::int64_t lo, std::int64_t hi,
                                     std::optional<Rational> tol, int stage_cap) {
    if (lo > hi) throw std::invalid_argument("empty lag range");
    CorrelationSeries out;
    out.first = lo;
    out.exact = true;
    out.mu_a = Rational(a.count()) * eng.width(a.stage);
    out.mu_b = Rational(b.count()) * eng.width(b.stage);
    if (eng.spec().finite_measure()) {
        const CoverBounds cover = eng.tower_cover(1);
        out.ambient = (cover.total_lo + cover.total_hi) / 2;
    } else {
        out.ambient = Rational(1); // raw masses; no normalization exists
    }
    out.values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) {
        MeetBounds mb = eng.shifted_meet(a, b, BigInt(n), tol, stage_cap);
        if (!mb.exact) out.exact = false;
        out.values.emplace_back(mb.lo, mb.hi);
    }
    return out;
}

CesaroDiagnostics cesaro_diagnostics(const CorrelationSeries& series,
                                     std::optional<double> target) {
    if (series.first > 1)
        throw std::invalid_argument("cesaro diagnostics need lags starting at 1 or below");
    const std::int64_t n_max = series.last();
    if (n_max < 1) throw std::invalid_argument("cesaro diagnostics need positive lags");
    CesaroDiagnostics out;
    const double amb = to_double(series.ambient);
    out.target = target ? *target
                        : to_double(series.mu_a) * to_double(series.mu_b) / (amb * amb);
    double sum = 0;
    double dev = 0;
    out.avg.reserve(static_cast<std::size_t>(n_max));
    out.absdev.reserve(static_cast<std::size_t>(n_max));
    for (std::int64_t i = 1; i <= n_max; ++i) {
        const double c = series.mid(i) / amb;
        sum += c;
        dev += std::abs(c - out.target);
        out.avg.push_back(sum / static_cast<double>(i));
        out.absdev.push_back(dev / static_cast<double>(i));
    }
    return out;
}

WeakLimitFit fit_simplex_least_squares(const std::vector<std::vector<double>>& x_rows,
                                       const std::vector<double>& y, std::int64_t n,
                                       const std::vector<std::int64_t>& basis) {
    if (basis.size() > 10) throw std::invalid_argument("basis larger than 10 exponents");
    if (x_rows.size() != y.size()) throw std::invalid_argument("row count mismatch");
    if (x_rows.size() < basis.size() + 1)
        throw std::invalid_argument("need at least one more test pair than basis exponents");
    const int cols = static_cast<int>(basis.size()) + 1;
    const int rows = static_cast<int>(x_rows.size());
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd Y(rows);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(x_rows[r].size()) != cols)
            throw std::invalid_argument("column count mismatch");
        for (int c = 0; c < cols; ++c) X(r, c) = x_rows[r][c];
        Y(r) = y[r];
    }

    WeakLimitFit fit;
    fit.n = n;
    fit.basis = basis;
    fit.coefficients.assign(cols, 0.0);
    fit.status = "ok";

    Eigen::FullPivLU<Eigen::MatrixXd> gram_rank(X.transpose() * X);
    const bool rank_deficient = gram_rank.rank() < cols;

    bool have_best = false;
    double best_sse = 0;
    Eigen::VectorXd best_a;
    std::vector<int> best_idx;

    for (unsigned mask = 1; mask < (1u << cols); ++mask) {
        std::vector<int> idx;
        for (int c = 0; c < cols; ++c)
            if (mask & (1u << c)) idx.push_back(c);
        const int m = static_cast<int>(idx.size());
        Eigen::MatrixXd Xs(rows, m);
        for (int c = 0; c < m; ++c) Xs.col(c) = X.col(idx[c]);
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
        kkt.topLeftCorner(m, m) = 2.0 * Xs.transpose() * Xs;
        kkt.topRightCorner(m, 1).setOnes();
        kkt.bottomLeftCorner(1, m).setOnes();
        Eigen::VectorXd rhs(m + 1);
        rhs.head(m) = 2.0 * Xs.transpose() * Y;
        rhs(m) = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd sol = lu.solve(rhs);
        Eigen::VectorXd a = sol.head(m);
        if ((a.array() < -1e-12).any()) continue;
        const double sse = (Xs * a - Y).squaredNorm();
        if (!have_best || sse < best_sse - 1e-15) {
            have_best = true;
            best_sse = sse;
            best_a = a;
            best_idx = idx;
        }
    }
    if (!have_best) {
        // every support was numerically singular; fall back to the uniform mix
        fit.status = "degenerate";
        for (int c = 0; c < cols; ++c) fit.coefficients[c] = 1.0 / cols;
        Eigen::VectorXd a = Eigen::VectorXd::Constant(cols, 1.0 / cols);
        fit.residual = (X * a - Y).squaredNorm();
        return fit;
    }
    for (std::size_t t = 0; t < best_idx.size(); ++t)
        fit.coefficients[best_idx[t]] = std::max(0.0, best_a(static_cast<int>(t)));
    fit.residual = best_sse;
    if (rank_deficient) fit.status = "degenerate";
    return fit;
}

namespace {

std::vector<double> theta_column(const std::vector<Rational>& mu_a,
                                 const std::vector<Rational>& mu_b, const Rational& ambient) {
    std::vector<double> out(mu_a.size());
    for (std::size_t i = 0; i < mu_a.size(); ++i)
        out[i] = to_double(mu_a[i] * mu_b[i] / (ambient * ambient));
    return out;
}

} // namespace

WeakLimitFit fit_weak_limit(const System& sys,
                            const std::vector<std::pair<MeasurableSet, MeasurableSet>>& pairs,
                            std::int64_t n, const std::vector<std::int64_t>& basis) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const auto& [a, b] : pairs) {
        std::vector<double> row;
        row.push_back(to_double(measure(a) * measure(b)));
        for (const auto k : basis) row.push_back(to_double(sys.correlation(a, b, k)));
        rows.push_back(std::move(row));
        y.push_back(to_double(sys.correlation(a, b, n)));
    }
    return fit_simplex_least_squares(rows, y, n, basis);
}

WeakLimitFit fit_weak_limit(const RankOne& eng,
                            const std::vector<std::pair<LevelSet, LevelSet>>& pairs,
                            std::int64_t n, const std::vector<std::int64_t>& basis,
                            std::optional<Rational> tol, int stage_cap) {
    if (!eng.spec().finite_measure())
        throw std::domain_error("weak-limit fit needs a finite-mass construction");
    const CoverBounds cover = eng.tower_cover(1);
    const Rational m_hat = (cover.total_lo + cover.total_hi) / 2;
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const auto& [a, b] : pairs) {
        const Rational mu_a = Rational(a.count()) * eng.width(a.stage);
        const Rational mu_b = Rational(b.count()) * eng.width(b.stage);
        std::vector<double> row;
        row.push_back(to_double(mu_a * mu_b / (m_hat * m_hat)));
        for (const auto k : basis) {
            MeetBounds mb = eng.shifted_meet(a, b, BigInt(k), tol, stage_cap);
            row.push_back(to_double((mb.lo + mb.hi) / 2 / m_hat));
        }
        rows.push_back(std::move(row));
        MeetBounds mb = eng.shifted_meet(a, b, BigInt(n), tol, stage_cap);
        y.push_back(to_double((mb.lo + mb.hi) / 2 / m_hat));
    }
    return fit_simplex_least_squares(rows, y, n, basis);
}

MeasurableSet canonical_member(SetFamily fam, int torus_dims, int index) {
    if (index < 1) throw std::invalid_argument("canonical index must be >= 1");
    int n = 0;
    while ((1 << (n + 1)) <= index + 1) ++n;
    const std::uint64_t k = static_cast<std::uint64_t>(index + 1) - (1ULL << n);
    switch (fam) {
        case SetFamily::Interval:
            return IntervalSet::interval(Rational(BigInt(k), BigInt(1) << n),
                                         Rational(BigInt(k + 1), BigInt(1) << n));
        case SetFamily::Cylinder: {
            std::map<std::int64_t, bool> bits;
            for (int t = 0; t < n; ++t) bits[t] = ((k >> (n - 1 - t)) & 1ULL) != 0;
            return CylinderSet::cylinder(std::move(bits));
        }
        case SetFamily::Rect: {
            // constrain x digit 1, y digit 1, x digit 2, ... in turn
            std::map<std::int64_t, bool> bits;
            for (int t = 0; t < n; ++t) {
                const bool v = ((k >> (n - 1 - t)) & 1ULL) != 0;
                const std::int64_t coord = (t % 2 == 0) ? (t / 2 + 1) : -(t / 2);
                bits[coord] = v;
            }
            return RectSet::from_code(CylinderSet::cylinder(std::move(bits)));
        }
        case SetFamily::Torus: {
            if (torus_dims < 1) throw std::invalid_argument("torus dims must be >= 1");
            // dyadic box: digit t goes to dimension t mod d
            std::vector<int> depth(torus_dims, 0);
            std::vector<BigInt> pos(torus_dims, BigInt(0));
            for (int t = 0; t < n; ++t) {
                const bool v = ((k >> (n - 1 - t)) & 1ULL) != 0;
                const int d = t % torus_dims;
                pos[d] = (pos[d] << 1) + (v ? 1 : 0);
                depth[d] += 1;
            }
            TorusBox box;
            for (int d = 0; d < torus_dims; ++d)
                box.factors.push_back(
                    IntervalSet::interval(Rational(pos[d], BigInt(1) << depth[d]),
                                          Rational(pos[d] + 1, BigInt(1) << depth[d])));
            return box;
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<MeasurableSet> canonical_family(const System& sys, int depth) {
    int dims = 1;
    if (const auto* tor = std::get_if<TorusSpec>(&sys.spec()))
        dims = static_cast<int>(tor->angles.size());
    std::vector<MeasurableSet> out;
    out.reserve(depth);
    for (int i = 1; i <= depth; ++i) out.push_back(canonical_member(sys.family(), dims, i));
    return out;
}

MetricReport halmos_distance(const System& s, const System& t, int depth) {
    if (s.family() != t.family())
        throw std::invalid_argument("transformations act on different set families");
    if (s.family() == SetFamily::Torus)
        throw std::domain_error("halmos distance needs symmetric differences, "
                                "which torus boxes do not support");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const auto fam = canonical_family(s, depth);
    Rational total(0);
    for (int i = 1; i <= depth; ++i) {
        const MeasurableSet& a = fam[static_cast<std::size_t>(i - 1)];
        Rational term(0);
        for (const std::int64_t dir : {+1, -1}) {
            const MeasurableSet sa = s.image(a, dir);
            const MeasurableSet ta = t.image(a, dir);
            term += measure(apply_op(sa, ta, SetOp::Symdiff));
        }
        total += pow2(-i) * term;
    }
    MetricReport rep;
    rep.value = to_double(total);
    rep.tail_bound = 4.0 * std::pow(2.0, -depth);
    rep.depth = depth;
    return rep;
}

MetricReport weak_distance(const System& u, OperatorRef ru, const System& v, OperatorRef rv,
                           int depth) {
    if (u.family() != v.family())
        throw std::invalid_argument("transformations act on different set families");
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const auto fam = canonical_family(u, depth);
    const auto pairing = [](const System& sys, const OperatorRef& ref, const MeasurableSet& a,
                            const MeasurableSet& b) {
        if (ref.theta) return measure(a) * measure(b);
        return sys.correlation(a, b, ref.exponent);
    };
    Rational total(0);
    for (int i = 1; i <= depth; ++i) {
        for (int j = 1; j <= depth; ++j) {
            const Rational cu = pairing(u, ru, fam[i - 1], fam[j - 1]);
            const Rational cv = pairing(v, rv, fam[i - 1], fam[j - 1]);
            total += pow2(-i - j) * abs(cu - cv);
        }
    }
    MetricReport rep;
    rep.value = to_double(total);
    const double kept = 1.0 - std::pow(2.0, -depth);
    rep.tail_bound = 1.0 - kept * kept;
    rep.depth = depth;
    return rep;
}

} // namespace ergolab
