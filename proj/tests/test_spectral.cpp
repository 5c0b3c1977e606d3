#include "oracle_helpers.hpp"

#include "ergolab/spectral.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

using namespace ergolab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

StepFunction centered_indicator(MeasurableSet s) {
    StepFunction f;
    f.terms.emplace_back(Rational(1), std::move(s));
    f.centered = true;
    return f;
}

double min_toeplitz_eigenvalue(const Autocovariance& ac, int dim) {
    REQUIRE(ac.max_lag() >= dim - 1);
    Eigen::MatrixXd t(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) t(r, c) = to_double(ac.sigma[static_cast<std::size_t>(std::abs(r - c))]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    return es.eigenvalues().minCoeff();
}

Autocovariance truncated(const Autocovariance& ac, int max_lag) {
    Autocovariance out;
    out.sigma.assign(ac.sigma.begin(), ac.sigma.begin() + max_lag + 1);
    out.mean = ac.mean;
    return out;
}

} // namespace

TEST_CASE("bernoulli centered indicator has white autocovariance") {
    const System sys((BernoulliSpec()));
    const StepFunction f = centered_indicator(CylinderSet::cylinder({{0, false}}));
    const Autocovariance ac = autocovariance(sys, f, 20);
    CHECK(ac.mean == Rational(1, 2));
    CHECK(ac.sigma.at(0) == Rational(1, 4));
    for (int i = 1; i <= 20; ++i) CHECK(ac.sigma.at(static_cast<std::size_t>(i)) == Rational(0));

    const std::vector<double> rho = fejer_density(ac, 512);
    CHECK(rho.size() == 512);
    for (const double v : rho) CHECK(std::fabs(v - 0.25) <= 1e-9);

    for (const double angle : {0.0, 0.5, 1.0, 3.14, 5.9})
        CHECK(wiener_atom(ac, angle) <= 1.0 / ac.max_lag());
}

TEST_CASE("all-ones sequence reproduces the fejer kernel") {
    Autocovariance ac;
    ac.sigma.assign(151, Rational(1)); // N = 151
    const int big_n = ac.max_lag() + 1;
    const std::vector<double> rho = fejer_density(ac, 302);
    CHECK(rho[0] == doctest::Approx(static_cast<double>(big_n)).epsilon(1e-12));
    double mean = 0;
    double lo = rho[0];
    for (const double v : rho) {
        mean += v;
        lo = std::min(lo, v);
    }
    mean /= static_cast<double>(rho.size());
    CHECK(std::fabs(mean - 1.0) <= 2.0 / 302.0 + 1e-9);
    CHECK(lo >= -1e-9);
}

TEST_CASE("identity rotation concentrates a single atom at angle zero") {
    const System sys(RotationSpec{Rational(0)});
    const StepFunction f = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 2)));
    const Autocovariance ac = autocovariance(sys, f, 400);
    for (int i = 0; i <= 400; ++i) CHECK(ac.sigma[static_cast<std::size_t>(i)] == Rational(1, 4));

    const EigenScanResult scan = eigen_scan(ac, 256, 0.01);
    REQUIRE(scan.atoms.size() == 1);
    CHECK(scan.atoms[0].angle == 0.0);
    CHECK(scan.atoms[0].mass == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(scan.closed);
}

TEST_CASE("rotation autocovariances respect the variance bound") {
    const System sys(RotationSpec{fibonacci_convergent(15)});
    const StepFunction f = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 2)));
    const Autocovariance ac = autocovariance(sys, f, 64);
    CHECK(ac.sigma[0] == Rational(1, 4));
    for (const Rational& s : ac.sigma) CHECK(abs(s) <= Rational(1, 4));
}

TEST_CASE("toeplitz matrices are positive semidefinite across presets") {
    const StepFunction half = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 2)));
    const System golden(RotationSpec{fibonacci_convergent(15)});
    CHECK(min_toeplitz_eigenvalue(autocovariance(golden, half, 11), 12) >= -1e-9);
    const System big(RotationSpec{Rational(610, 987)});
    CHECK(min_toeplitz_eigenvalue(autocovariance(big, half, 11), 12) >= -1e-9);
    const System third(RotationSpec{Rational(1, 3)});
    const StepFunction fifth = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 5)));
    CHECK(min_toeplitz_eigenvalue(autocovariance(third, fifth, 11), 12) >= -1e-9);

    const System ber((BernoulliSpec()));
    StepFunction two_term;
    two_term.terms.emplace_back(Rational(1), CylinderSet::cylinder({{0, false}}));
    two_term.terms.emplace_back(Rational(-1, 2), CylinderSet::cylinder({{1, false}, {2, true}}));
    two_term.centered = true;
    CHECK(min_toeplitz_eigenvalue(autocovariance(ber, two_term, 11), 12) >= -1e-9);

    const System bak((BakerSpec()));
    const StepFunction left = centered_indicator(
        RectSet::from_rectangles({{Rational(0), Rational(1, 2), Rational(0), Rational(1)}}));
    CHECK(min_toeplitz_eigenvalue(autocovariance(bak, left, 11), 12) >= -1e-9);

    const System tor(TorusSpec{{Rational(2, 5), Rational(1, 3)}});
    TorusBox box;
    box.factors.push_back(IntervalSet::interval(Rational(0), Rational(1, 2)));
    box.factors.push_back(IntervalSet::interval(Rational(1, 4), Rational(1)));
    CHECK(min_toeplitz_eigenvalue(autocovariance(tor, centered_indicator(box), 11), 12) >= -1e-9);
}

TEST_CASE("grid mean of the density matches the variance") {
    const System sys(RotationSpec{Rational(1, 3)});
    const StepFunction f = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 5)));
    const Autocovariance ac = autocovariance(sys, f, 300);
    const std::vector<double> rho = fejer_density(ac, 512, 4);
    double mean = 0;
    double lo = rho[0];
    for (const double v : rho) {
        mean += v;
        lo = std::min(lo, v);
    }
    mean /= static_cast<double>(rho.size());
    const double s0 = to_double(ac.sigma[0]);
    CHECK(std::fabs(mean - s0) <= 2.0 * s0 / 512.0 + 1e-9);
    CHECK(lo >= -1e-9);
}

TEST_CASE("rotation density peaks at the rotation angle") {
    const System sys(RotationSpec{Rational(610, 987)});
    const StepFunction f = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 2)));
    const Autocovariance ac = autocovariance(sys, f, 399);
    const std::vector<double> rho = fejer_density(ac, 1024, 4);
    double lo = rho[0];
    for (const double v : rho) lo = std::min(lo, v);
    CHECK(lo >= -1e-9);

    const double atom_angle = kTwoPi * 610.0 / 987.0;
    const std::size_t near = static_cast<std::size_t>(
        std::llround(atom_angle / kTwoPi * 1024.0) % 1024);
    const std::size_t far = 512; // pi sits away from every odd-frequency atom
    CHECK(rho[near] > 3.0 * rho[far]);
}

TEST_CASE("wiener statistic finds the golden-rotation atom") {
    const System sys(RotationSpec{fibonacci_convergent(20)});
    const StepFunction f = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 2)));
    const Autocovariance ac = autocovariance(sys, f, 2000);
    const double alpha = to_double(fibonacci_convergent(20));
    const double atom = kTwoPi * alpha;
    const double inv_pi2 = 1.0 / (3.14159265358979323846 * 3.14159265358979323846);

    const double est = wiener_atom(ac, atom);
    CHECK(std::fabs(est - inv_pi2) <= 0.15 * inv_pi2);

    // at horizon one every angle reads the same; by 500 the curves have split
    const double off = 1.0;
    CHECK(wiener_atom(truncated(ac, 1), atom) ==
          doctest::Approx(wiener_atom(truncated(ac, 1), off)).epsilon(1e-12));
    const double atom_short = wiener_atom(truncated(ac, 50), atom);
    const double atom_mid = wiener_atom(truncated(ac, 500), atom);
    const double off_short = wiener_atom(truncated(ac, 50), off);
    const double off_mid = wiener_atom(truncated(ac, 500), off);
    CHECK(atom_mid > atom_short);
    CHECK(off_mid < off_short);
    CHECK(atom_mid > 10.0 * off_mid);
}

TEST_CASE("eigen scan resolves the odd-frequency atoms of a rational rotation") {
    const System sys(RotationSpec{Rational(610, 987)});
    const StepFunction f = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 2)));
    const Autocovariance ac = autocovariance(sys, f, 987);
    const EigenScanResult scan = eigen_scan(ac, 2048, 0.008, 0, 4);

    REQUIRE(scan.atoms.size() == 4);
    const double inv_pi2 = 1.0 / (3.14159265358979323846 * 3.14159265358979323846);
    std::vector<double> expected_angles = {
        kTwoPi * 144.0 / 987.0, // -3a
        kTwoPi * 377.0 / 987.0, // -a
        kTwoPi * 610.0 / 987.0, // +a
        kTwoPi * 843.0 / 987.0, // +3a
    };
    const double expected_mass[] = {inv_pi2 / 9.0, inv_pi2, inv_pi2, inv_pi2 / 9.0};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::fabs(scan.atoms[i].angle - expected_angles[i]) <= 0.01);
        CHECK(std::fabs(scan.atoms[i].mass - expected_mass[i]) <= 0.15 * expected_mass[i]);
    }
    // {+-a, +-3a} misses the even frequencies, so the group property fails
    CHECK(!scan.closed);
}

TEST_CASE("periodic rotation atoms form a group") {
    const System sys(RotationSpec{Rational(1, 3)});
    const StepFunction f = centered_indicator(IntervalSet::interval(Rational(0), Rational(1, 5)));
    const Autocovariance ac = autocovariance(sys, f, 300);
    const EigenScanResult scan = eigen_scan(ac, 768, 0.01);

    REQUIRE(scan.atoms.size() == 3);
    CHECK(scan.closed);
    CHECK(scan.atoms[0].angle == 0.0);
    CHECK(scan.atoms[1].angle == doctest::Approx(kTwoPi / 3.0).epsilon(1e-12));
    CHECK(scan.atoms[2].angle == doctest::Approx(2.0 * kTwoPi / 3.0).epsilon(1e-12));
    // invariant part carries 2/75, each rotating component 1/15
    CHECK(scan.atoms[0].mass == doctest::Approx(2.0 / 75.0).epsilon(1e-9));
    CHECK(scan.atoms[1].mass == doctest::Approx(1.0 / 15.0).epsilon(1e-9));
    CHECK(scan.atoms[2].mass == doctest::Approx(1.0 / 15.0).epsilon(1e-9));
}

TEST_CASE("bernoulli spectrum shows no atoms") {
    const System sys((BernoulliSpec()));
    const StepFunction f = centered_indicator(CylinderSet::cylinder({{0, false}}));
    const Autocovariance ac = autocovariance(sys, f, 500);
    const EigenScanResult scan = eigen_scan(ac, 1024, 0.01);
    CHECK(scan.atoms.empty());
    CHECK(scan.closed); // vacuously
}

TEST_CASE("density needs at least the zero lag") {
    Autocovariance ac;
    CHECK_THROWS_AS(fejer_density(ac, 64), std::domain_error);
    CHECK_THROWS_AS(eigen_scan(ac, 64), std::invalid_argument);
}
