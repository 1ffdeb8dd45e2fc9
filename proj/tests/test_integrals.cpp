#include <doctest.h>

#include <cmath>
#include <complex>

#include "eigenscope/errors.hpp"
#include "eigenscope/integrals.hpp"
#include "test_helpers.hpp"

using namespace eigenscope;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigenfunction sphere_real(const Manifold& m, int j, int order) {
    return Eigenfunction(m, {SpectralIndex::Kind::SphereReal, j, order, {}});
}

Eigenfunction torus_exp(const Manifold& m, int k1, int k2) {
    Eigen::VectorXi k(2);
    k << k1, k2;
    return Eigenfunction(m, {SpectralIndex::Kind::TorusLattice, 0, 0, k});
}

const EigenLevel* find_level(const std::vector<EigenLevel>& levels, double lambda) {
    for (auto& l : levels)
        if (std::abs(l.lambda - lambda) < 1e-9) return &l;
    return nullptr;
}

}  // namespace

TEST_CASE("equator integrals against closed forms") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 20.0);

    // constant harmonic: 2 pi / sqrt(4 pi) = sqrt(pi)
    CHECK(integrate_eigenfunction(sphere_real(s2, 0, 0), eq).real() ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(integrate_eigenfunction(sphere_real(s2, 0, 0), eq).real() ==
          doctest::Approx(1.772454).epsilon(1e-6));

    // odd degree vanishes by reflection across the equator
    CHECK(std::abs(integrate_eigenfunction(sphere_real(s2, 1, 0), eq)) < 1e-12);

    // degree 2: 2 pi * Y_20(equator) = -2 pi sqrt(5/(16 pi))
    double expect = -2 * kPi * std::sqrt(5.0 / (16 * kPi));
    std::complex<double> v = integrate_eigenfunction(sphere_real(s2, 2, 0), eq);
    CHECK(v.real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(v.real() == doctest::Approx(-1.981664).epsilon(1e-6));
}

TEST_CASE("torus line integrals pick out k1 = 0") {
    Manifold t2 = Manifold::torus(2);
    Submanifold line = Submanifold::torus_line(t2, 50.0);
    CHECK(integrate_eigenfunction(torus_exp(t2, 0, 3), line).real() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(integrate_eigenfunction(torus_exp(t2, 2, 5), line)) < 1e-12);
}

TEST_CASE("resolution rule refuses an under-resolved quadrature") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 5.0);
    CHECK_THROWS_AS(integrate_eigenfunction(sphere_real(s2, 50, 3), eq), ResolutionError);
}

TEST_CASE("eigenspace moments on the equator") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 20.0);
    auto levels = enumerate_levels(s2, 5.0);

    auto mom2 = eigenspace_moments(levels[2], eq);  // j = 2
    REQUIRE(mom2.size() == 5);
    for (int m = -2; m <= 2; ++m) {
        if (m == 0) {
            CHECK(mom2[2].real() == doctest::Approx(-1.981664).epsilon(1e-6));
        } else {
            CHECK(std::abs(mom2[static_cast<std::size_t>(m + 2)]) < 1e-12);
        }
    }

    auto mom1 = eigenspace_moments(levels[1], eq);  // j = 1, odd
    for (auto& mu : mom1) CHECK(std::abs(mu) < 1e-12);

    auto mom0 = eigenspace_moments(levels[0], eq);  // constants
    REQUIRE(mom0.size() == 1);
    CHECK(mom0[0].real() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("maximizer from moments") {
    Eigen::VectorXcd mu(2);
    mu << std::complex<double>(3, 0), std::complex<double>(0, 4);
    MaximizerResult r = maximizer_from_moments(mu);
    CHECK(r.value == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(!r.degenerate);
    // Cauchy-Schwarz equality: c proportional to the conjugated moments
    std::complex<double> attained = 0.0;
    for (int i = 0; i < 2; ++i) attained += r.coeffs[i] * mu[i];
    CHECK(std::abs(attained) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(r.coeffs.norm() == doctest::Approx(1.0).epsilon(1e-14));

    MaximizerResult z = maximizer_from_moments(Eigen::VectorXcd::Zero(3));
    CHECK(z.degenerate);
    CHECK(z.value == 0.0);
    CHECK(z.coeffs.norm() == doctest::Approx(1.0));
}

TEST_CASE("eigenspace maximizer on the equator") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 20.0);
    auto levels = enumerate_levels(s2, 5.0);

    MaximizerResult r2 = eigenspace_maximizer(levels[2], eq);
    CHECK(r2.value == doctest::Approx(1.981664).epsilon(1e-6));
    CHECK(std::abs(r2.coeffs[2]) == doctest::Approx(1.0).epsilon(1e-9));  // +-Y_2^0

    MaximizerResult r1 = eigenspace_maximizer(levels[1], eq);  // odd degree: all moments vanish
    CHECK(r1.degenerate);
    CHECK(r1.value == 0.0);
    CHECK(r1.coeffs.norm() == doctest::Approx(1.0));
}

TEST_CASE("maximizer optimality against random coefficients") {
    RngStream rng(31, 0);
    Eigen::VectorXcd mu(7);
    for (int i = 0; i < 7; ++i) mu[i] = std::complex<double>(rng.normal(), rng.normal()) * 0.3;
    MaximizerResult r = maximizer_from_moments(mu);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXcd c(7);
        for (int i = 0; i < 7; ++i) c[i] = std::complex<double>(rng.normal(), rng.normal());
        c /= c.norm();
        std::complex<double> attained = 0.0;
        for (int i = 0; i < 7; ++i) attained += c[i] * mu[i];
        CHECK(std::abs(attained) <= r.value + 1e-12);
    }
}

TEST_CASE("band sums on the equator") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 20.0);

    BandSum b = band_sum(s2, eq, 2.0, 1.0);  // only j = 2 inside
    CHECK(b.value == doctest::Approx(5 * kPi / 4).epsilon(1e-12));
    CHECK(b.value == doctest::Approx(3.926991).epsilon(1e-6));
    REQUIRE(b.contributing.size() == 1);
    CHECK(b.contributing[0].multiplicity == 5);

    BandSum empty = band_sum(s2, eq, 2.6, 0.4);  // no level in [2.6, 3.0]
    CHECK(empty.value == 0.0);
    CHECK(empty.contributing.empty());
}

TEST_CASE("point band sums count lattice points") {
    Manifold t2 = Manifold::torus(2);
    Submanifold pt = Submanifold::torus_point(t2);
    // |e_k(x)|^2 = 1 for unit periods, so a band sum equals the number
    // of lattice points with frequency in the band
    auto oracle = [](double lo, double hi) {
        int count = 0;
        for (int a = -30; a <= 30; ++a)
            for (int b = -30; b <= 30; ++b) {
                double lam = 2 * kPi * std::sqrt(double(a) * a + double(b) * b);
                if (lam >= lo && lam <= hi) ++count;
            }
        return count;
    };
    for (double lo : {5.0, 6.0, 8.0, 12.5, 20.0}) {
        BandSum b = band_sum(t2, pt, lo, 1.0);
        CHECK(b.value == doctest::Approx(double(oracle(lo, lo + 1.0))).epsilon(1e-9));
    }
}

TEST_CASE("weyl sums on the equator") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 20.0);
    CHECK(weyl_sum(s2, eq, 0.0) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(weyl_sum(s2, eq, 2.5) == doctest::Approx(9 * kPi / 4).epsilon(1e-12));
    CHECK(weyl_sum(s2, eq, 2.5) == doctest::Approx(7.068583).epsilon(1e-6));
}

TEST_CASE("weyl growth matches the n - d exponent") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 61.0);
    auto table = level_moment_table(s2, eq, 61.0);
    std::vector<std::pair<double, double>> samples;
    std::size_t next = 0;
    double acc = 0.0;
    for (double l = 10; l <= 60; l += 1.0) {
        while (next < table.size() && table[next].lambda <= l) acc += table[next++].sum_sq;
        samples.emplace_back(l, acc);
    }
    ExponentFit fit = fit_exponent(samples);
    CHECK(std::abs(fit.slope - 1.0) < 0.1);
    CHECK(fit.r2 >= 0.99);
}

TEST_CASE("exponent fits") {
    std::vector<std::pair<double, double>> square, flat, tiny;
    for (double l : {2.0, 4.0, 9.0, 15.0, 30.0}) square.emplace_back(l, l * l);
    ExponentFit f1 = fit_exponent(square);
    CHECK(f1.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f1.r2 == doctest::Approx(1.0).epsilon(1e-12));

    for (double l : {2.0, 4.0, 9.0, 15.0}) flat.emplace_back(l, 3.7);
    ExponentFit f2 = fit_exponent(flat);
    CHECK(f2.slope == doctest::Approx(0.0));

    tiny.emplace_back(2.0, 1.0);
    tiny.emplace_back(3.0, 1.0);
    CHECK_THROWS_AS(fit_exponent(tiny), NumericError);

    // zero-threshold drops exact parity zeros and reports the count
    std::vector<std::pair<double, double>> mixed;
    for (double l : {2.0, 3.0, 4.0, 5.0, 6.0, 7.0}) mixed.emplace_back(l, (int(l) % 2 == 0) ? l : 0.0);
    ExponentFit f3 = fit_exponent(mixed);
    CHECK(f3.dropped == 3);
    CHECK(f3.used == 3);
}

TEST_CASE("band sum is invariant under a basis rotation") {
    Manifold s2 = Manifold::sphere(2);
    Submanifold eq = Submanifold::sphere_equator(s2, 20.0);
    auto levels = enumerate_levels(s2, 5.0);
    const EigenLevel& lv = levels[4];  // j = 4, 9-dimensional
    auto mom = eigenspace_moments(lv, eq);

    // random orthogonal mix, applied by integrating the mixed functions
    RngStream rng(32, 0);
    Eigen::MatrixXd g(9, 9);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd Q = qr.householderQ();

    std::vector<Eigenfunction> basis;
    for (auto& idx : lv.indices) basis.emplace_back(s2, idx);
    const SurfaceRule& rule = eq.rule();
    Eigen::VectorXcd mixed = Eigen::VectorXcd::Zero(9);
    for (int i = 0; i < rule.weights.size(); ++i) {
        Point p = eq.embed(rule.nodes.col(i));
        Eigen::VectorXcd vals(9);
        for (int a = 0; a < 9; ++a) vals[a] = basis[static_cast<std::size_t>(a)](p);
        mixed += rule.weights[i] * (Q.transpose() * vals);
    }
    double sum_orig = 0.0, sum_mixed = mixed.squaredNorm();
    for (auto& mu : mom) sum_orig += std::norm(mu);
    CHECK(std::abs(sum_orig - sum_mixed) < 1e-10);
}

TEST_CASE("quadrature convergence under node doubling") {
    Manifold s2 = Manifold::sphere(2);
    Manifold t2 = Manifold::torus(2);
    struct Case {
        Submanifold sigma;
        Eigenfunction e;
    };
    std::vector<Case> cases;
    cases.push_back({Submanifold::sphere_equator(s2, 100.0), sphere_real(s2, 40, 7)});
    cases.push_back({Submanifold::sphere_latitude(s2, 1.0, 100.0), sphere_real(s2, 30, 11)});
    cases.push_back({Submanifold::torus_line(t2, 100.0), torus_exp(t2, 5, 9)});
    cases.push_back({Submanifold::torus_sine_arc(t2, 0.15, 100.0), torus_exp(t2, 7, 9)});
    for (auto& c : cases) {
        std::complex<double> a = integrate_eigenfunction(c.e, c.sigma);
        std::complex<double> b = integrate_eigenfunction(c.e, c.sigma.with_node_factor(2.0));
        CHECK(std::abs(a - b) < 1e-8);
    }
    // total measure is stable too
    for (auto& c : cases)
        CHECK(std::abs(c.sigma.measure() - c.sigma.with_node_factor(2.0).measure()) < 1e-8);
}

TEST_CASE("real data gives real integrals") {
    Manifold s2 = Manifold::sphere(2);
    for (auto& sigma : {Submanifold::sphere_equator(s2, 20.0), Submanifold::sphere_latitude(s2, 0.8, 20.0)}) {
        std::complex<double> v = integrate_eigenfunction(sphere_real(s2, 6, 3), sigma);
        CHECK(std::abs(v.imag()) < 1e-12);
    }
}

TEST_CASE("embedding injectivity via pairwise node separation") {
    Manifold s2 = Manifold::sphere(2);
    Manifold t2 = Manifold::torus(2);
    for (const Submanifold& sigma :
         {Submanifold::sphere_equator(s2, 30.0), Submanifold::torus_sine_arc(t2, 0.15, 30.0)}) {
        const SurfaceRule& rule = sigma.rule();
        int n = static_cast<int>(rule.weights.size());
        double min_sep = 1e300;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = sigma.manifold().distance(sigma.embed(rule.nodes.col(i)),
                                                     sigma.embed(rule.nodes.col(j)));
                min_sep = std::min(min_sep, d);
            }
        CHECK(min_sep > 0.0);
    }
}
