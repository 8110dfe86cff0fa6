#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symstat/euclidean.hpp"
#include "symstat/hyperboloid.hpp"
#include "symstat/invariants.hpp"
#include "symstat/spd.hpp"
#include "symstat/symmetry.hpp"

#include <cmath>

using namespace symstat;

TEST_CASE("the center is a fixed point") {
    auto space = HyperboloidSpace::make(2);
    RngStream rng(5);
    Point c = random_point(space, rng, 1.0);
    GeodesicSymmetry s(space, c);
    CHECK(space->distance(s(c), c) < 1e-12);
}

TEST_CASE("euclidean symmetry about the origin is negation") {
    auto space = EuclideanSpace::make(3);
    GeodesicSymmetry s(space, space->origin());
    Point x = space->point(Eigen::Vector3d(1.0, -2.0, 0.5));
    CHECK((s(x).coords + x.coords).norm() < 1e-14);
}

TEST_CASE("spd symmetry about the identity inverts, against an lu oracle") {
    auto space = SpdSpace::make(3);
    RngStream rng(17);
    Point a = random_point(space, rng, 0.8);
    GeodesicSymmetry s(space, space->origin());
    // Independent route: plain LU inverse of the matrix.
    Eigen::MatrixXd expected = space->matrix(a).inverse();
    CHECK((space->matrix(s(a)) - expected).norm() < 1e-10 * (1.0 + expected.norm()));
}

TEST_CASE("symmetry preserves distance to the center") {
    RngStream rng(31);
    std::vector<ManifoldPtr> spaces = {EuclideanSpace::make(2), HyperboloidSpace::make(2),
                                       SpdSpace::make(2)};
    for (const auto& space : spaces) {
        GeodesicSymmetry s(space, random_point(space, rng, 0.7));
        for (int i = 0; i < 30; ++i) {
            Point x = random_point(space, rng, 1.0);
            CHECK(std::abs(space->distance(s.center(), s(x)) - space->distance(s.center(), x)) <
                  1e-9);
        }
    }
}

TEST_CASE("a euclidean transvection is a translation by twice the center gap") {
    auto line = EuclideanSpace::make(1);
    Point mu1 = line->point(Eigen::VectorXd::Constant(1, 0.0));
    Point mu2 = line->point(Eigen::VectorXd::Constant(1, 1.0));
    Transvection t(line, mu1, mu2, Transvection::Order::second_after_first);
    Point x = line->point(Eigen::VectorXd::Constant(1, 5.0));
    CHECK(t(x).coords(0) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(t.length() == doctest::Approx(2.0).epsilon(1e-14));
    // m = 0 is the identity.
    CHECK((t.apply(x, 0).coords - x.coords).norm() == 0.0);
    // The reversed order translates the other way.
    Transvection r(line, mu1, mu2, Transvection::Order::first_after_second);
    CHECK(r(x).coords(0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("hyperbolic displacement meets the length bound") {
    auto space = HyperboloidSpace::make(2);
    RngStream rng(77);
    Point mu1 = random_point(space, rng, 0.5);
    TangentVector dir = random_tangent(space, mu1, rng, 1.0);
    dir = space->scaled(dir, 0.7 / space->norm(dir));
    Point mu2 = space->exp(mu1, dir);
    REQUIRE(space->distance(mu1, mu2) == doctest::Approx(0.7).epsilon(1e-10));
    Transvection t(space, mu1, mu2);
    for (int i = 0; i < 20; ++i) {
        Point x = random_point(space, rng, 1.0);
        double disp = space->distance(x, t.apply(x, 3));
        CHECK(disp >= 3.0 * 2.0 * 0.7 - 1e-8);
    }
}

TEST_CASE("transvections preserve pairwise distances") {
    RngStream rng(99);
    std::vector<ManifoldPtr> spaces = {HyperboloidSpace::make(2), SpdSpace::make(2)};
    for (const auto& space : spaces) {
        Point mu1 = random_point(space, rng, 0.4);
        Point mu2 = random_point(space, rng, 0.4);
        Transvection t(space, mu1, mu2);
        for (int i = 0; i < 20; ++i) {
            Point x = random_point(space, rng, 1.0);
            Point y = random_point(space, rng, 1.0);
            CHECK(std::abs(space->distance(t(x), t(y)) - space->distance(x, y)) < 1e-9);
        }
    }
}

TEST_CASE("displacement report over random spd points") {
    auto space = SpdSpace::make(2);
    RngStream rng(111);
    Point mu1 = random_point(space, rng, 0.4);
    TangentVector dir = random_tangent(space, mu1, rng, 1.0);
    dir = space->scaled(dir, 0.5 / space->norm(dir));
    Point mu2 = space->exp(mu1, dir);
    std::vector<Point> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(random_point(space, rng, 0.8));
    DisplacementReport report = displacement_bound_check(space, mu1, mu2, pts, 10);
    CHECK(report.pass);
    CHECK(report.rows.size() == 10);
    for (const DisplacementRow& row : report.rows) {
        CHECK(row.bound == doctest::Approx(row.m * 1.0).epsilon(1e-9));
        CHECK(row.min_displacement >= row.bound - 1e-6);
    }
}

TEST_CASE("coincident centers are rejected as degenerate") {
    auto space = EuclideanSpace::make(2);
    Point mu = space->origin();
    std::vector<Point> pts = {space->point(Eigen::Vector2d(1.0, 0.0))};
    CHECK_THROWS_AS((void)displacement_bound_check(space, mu, mu, pts, 3),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)displacement_bound_check(space, mu, mu, {}, 3),
                    std::invalid_argument);
}

TEST_CASE("symmetry invariant suite passes") {
    auto results = run_invariant_suite("symmetry", 2024);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.pass);
    }
    CHECK(results.size() == 3);
}
