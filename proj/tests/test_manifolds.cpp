#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symstat/euclidean.hpp"
#include "symstat/hyperboloid.hpp"
#include "symstat/invariants.hpp"
#include "symstat/product.hpp"
#include "symstat/spd.hpp"

#include <cmath>

using namespace symstat;

namespace {

// Test-side oracle for diagonal SPD matrices: matrix log/exp reduce to the
// scalar functions on the diagonal, so expected values are computed without
// touching the eigendecomposition path under test.
Eigen::MatrixXd diag2(double a, double b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_CASE("euclidean distance with identity gram is pythagorean") {
    auto space = EuclideanSpace::make(2);
    Point x = space->point(Eigen::Vector2d(0.0, 0.0));
    Point y = space->point(Eigen::Vector2d(3.0, 4.0));
    CHECK(space->distance(x, y) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(space->distance(x, x) == 0.0);
}

TEST_CASE("euclidean inner product uses the gram matrix") {
    Eigen::MatrixXd g = diag2(1.0, 4.0);
    auto space = EuclideanSpace::make(2, g);
    Point b = space->origin();
    TangentVector u{b, Eigen::Vector2d(1.0, 1.0)};
    CHECK(space->inner(u, u) == doctest::Approx(5.0).epsilon(1e-12));
    TangentVector z{b, Eigen::Vector2d(0.0, 0.0)};
    CHECK(space->inner(u, z) == 0.0);
    // log is the coordinate difference regardless of the gram matrix.
    Point y = space->point(Eigen::Vector2d(2.0, -1.0));
    CHECK((space->log(b, y).vec - Eigen::Vector2d(2.0, -1.0)).norm() == 0.0);
}

TEST_CASE("euclidean geodesic midpoint") {
    auto space = EuclideanSpace::make(2);
    Point x = space->point(Eigen::Vector2d(0.0, 0.0));
    Point y = space->point(Eigen::Vector2d(2.0, 2.0));
    Point mid = space->geodesic(x, y, 0.5);
    CHECK((mid.coords - Eigen::Vector2d(1.0, 1.0)).norm() < 1e-14);
    CHECK((space->geodesic(x, y, 0.0).coords - x.coords).norm() == 0.0);
    CHECK((space->geodesic(x, y, 1.0).coords - y.coords).norm() == 0.0);
    CHECK_THROWS_AS((void)space->geodesic(x, y, 1.5), std::domain_error);
    CHECK_THROWS_AS((void)space->geodesic(x, y, -0.1), std::domain_error);
}

TEST_CASE("spd distance against the diagonal oracle") {
    auto space = SpdSpace::make(2);
    Point id = space->origin();
    // d(I, diag(e, 1)) = |diag(log e, log 1)|_F = 1
    Point y = space->point(diag2(std::exp(1.0), 1.0));
    CHECK(space->distance(id, y) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(space->distance(y, y) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spd exp and log against the diagonal oracle") {
    auto space = SpdSpace::make(2);
    Point id = space->origin();
    TangentVector v = space->tangent(id, diag2(1.0, 0.0));
    Point e = space->exp(id, v);
    CHECK((space->matrix(e) - diag2(std::exp(1.0), 1.0)).norm() < 1e-12);

    Point y = space->point(diag2(std::exp(2.0), 1.0));
    TangentVector lg = space->log(id, y);
    CHECK((space->matrix(lg) - diag2(2.0, 0.0)).norm() < 1e-12);

    Point back = space->exp(id, space->zero_tangent(id));
    CHECK((back.coords - id.coords).norm() == 0.0);
}

TEST_CASE("spd inner product at the identity is the frobenius inner product") {
    auto space = SpdSpace::make(2);
    Point id = space->origin();
    TangentVector v = space->tangent(id, diag2(1.0, 1.0));
    CHECK(space->inner(v, v) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("spd geodesic midpoint of a matrix and its inverse is the identity") {
    auto space = SpdSpace::make(2);
    Point a = space->point(diag2(4.0, 1.0));
    Point ainv = space->point(diag2(0.25, 1.0));
    Point mid = space->geodesic(a, ainv, 0.5);
    CHECK((space->matrix(mid) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-10);
}

TEST_CASE("spd rejects non positive definite input") {
    auto space = SpdSpace::make(2);
    CHECK_THROWS_AS((void)space->point(diag2(1.0, -0.5)), std::invalid_argument);
    Eigen::MatrixXd skew(2, 2);
    skew << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS((void)space->point(skew), std::invalid_argument);
}

TEST_CASE("hyperboloid unit-speed geodesic traverses the right distance") {
    auto space = HyperboloidSpace::make(2);
    Point base = space->origin();
    for (double t : {1e-6, 0.1, 1.0, 5.0}) {
        Eigen::Vector3d vec(0.0, t, 0.0);
        TangentVector v{base, vec};
        Point e = space->exp(base, v);
        CHECK(space->distance(base, e) == doctest::Approx(t).epsilon(1e-10));
    }
}

TEST_CASE("hyperboloid log inverts exp near and far") {
    auto space = HyperboloidSpace::make(2);
    Point base = space->point(Eigen::Vector3d(std::cosh(0.7), std::sinh(0.7), 0.0));
    TangentVector zero = space->log(base, base);
    CHECK(space->norm(zero) == 0.0);

    TangentVector v = space->tangent_from_coeffs(base, Eigen::Vector2d(0.4, -1.1));
    Point y = space->exp(base, v);
    TangentVector w = space->log(base, y);
    CHECK(space->norm(TangentVector{base, w.vec - v.vec}) < 1e-10);
}

TEST_CASE("hyperboloid validates the sheet constraint") {
    auto space = HyperboloidSpace::make(2);
    CHECK_THROWS_AS((void)space->point(Eigen::Vector3d(2.0, 0.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS((void)space->point(Eigen::Vector3d(-1.0, 0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("hyperboloid far point materialization overflows loudly") {
    auto space = HyperboloidSpace::make(2);
    Point base = space->origin();
    TangentVector v = space->tangent_from_coeffs(base, Eigen::Vector2d(1200.0, 0.0));
    CHECK_THROWS_AS((void)space->exp(base, v), std::overflow_error);
}

TEST_CASE("mismatched spaces are rejected") {
    auto e2 = EuclideanSpace::make(2);
    auto e3 = EuclideanSpace::make(3);
    Point a = e2->origin();
    Point b = e3->origin();
    CHECK_THROWS_AS((void)e2->distance(a, b), std::domain_error);
    // Tangent anchored elsewhere.
    Point c = e2->point(Eigen::Vector2d(1.0, 0.0));
    TangentVector v{c, Eigen::Vector2d(1.0, 1.0)};
    CHECK_THROWS_AS((void)e2->exp(a, v), std::domain_error);
    CHECK_THROWS_AS((void)e2->inner(v, e2->zero_tangent(a)), std::domain_error);
}

TEST_CASE("equal tags from separately built spaces interoperate") {
    auto s1 = SpdSpace::make(2);
    auto s2 = SpdSpace::make(2);
    Point a = s1->origin();
    Point b = s2->point(diag2(2.0, 3.0));
    CHECK(s1->distance(a, b) > 0.0);
}

TEST_CASE("product of two lines gives the pythagorean sum") {
    auto line = EuclideanSpace::make(1);
    auto prod = ProductSpace::make({line, line});
    Point x = prod->make_point({line->point(Eigen::VectorXd::Constant(1, 0.0)),
                                line->point(Eigen::VectorXd::Constant(1, 0.0))});
    Point y = prod->make_point({line->point(Eigen::VectorXd::Constant(1, 3.0)),
                                line->point(Eigen::VectorXd::Constant(1, 4.0))});
    CHECK(prod->distance(x, y) == doctest::Approx(5.0).epsilon(1e-12));
    Point back = prod->exp(x, prod->zero_tangent(x));
    CHECK((back.coords - x.coords).norm() == 0.0);
}

TEST_CASE("product of a line and spd(2) combines factor distances") {
    auto line = EuclideanSpace::make(1);
    auto spd = SpdSpace::make(2);
    auto prod = ProductSpace::make({line, spd});
    Point x = prod->make_point({line->point(Eigen::VectorXd::Constant(1, 0.0)), spd->origin()});
    Point y = prod->make_point({line->point(Eigen::VectorXd::Constant(1, 1.0)),
                                spd->point(diag2(std::exp(1.0), 1.0))});
    // Factor oracles: 1 on the line and 1 on spd, so sqrt(2) in the product.
    CHECK(prod->distance(x, y) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS((void)ProductSpace::make({}), std::domain_error);
}

TEST_CASE("exp norm matches distance on every family") {
    RngStream rng(99);
    std::vector<ManifoldPtr> spaces = {EuclideanSpace::make(3), HyperboloidSpace::make(3),
                                       SpdSpace::make(3)};
    for (const auto& space : spaces) {
        for (int i = 0; i < 50; ++i) {
            Point base = random_point(space, rng, 0.8);
            TangentVector v = random_tangent(space, base, rng, 0.9);
            Point y = space->exp(base, v);
            CHECK(space->distance(base, y) ==
                  doctest::Approx(space->norm(v)).epsilon(1e-8));
        }
    }
}

TEST_CASE("tangent coefficient charts are isometric") {
    RngStream rng(123);
    std::vector<ManifoldPtr> spaces = {EuclideanSpace::make(2, diag2(1.0, 4.0)),
                                       HyperboloidSpace::make(2), SpdSpace::make(2)};
    for (const auto& space : spaces) {
        for (int i = 0; i < 50; ++i) {
            Point base = random_point(space, rng, 0.8);
            Eigen::VectorXd c(space->dimension());
            for (int j = 0; j < c.size(); ++j) c(j) = rng.next_normal();
            TangentVector v = space->tangent_from_coeffs(base, c);
            CHECK(space->norm(v) == doctest::Approx(c.norm()).epsilon(1e-10));
            Eigen::VectorXd back = space->coeffs_from_tangent(v);
            CHECK((back - c).norm() < 1e-9 * (1.0 + c.norm()));
        }
    }
}

TEST_CASE("geometry invariant suite passes") {
    auto results = run_invariant_suite("geometry", 2024);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.pass);
    }
    CHECK(results.size() == 4);
}
