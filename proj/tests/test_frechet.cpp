#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symstat/euclidean.hpp"
#include "symstat/frechet.hpp"
#include "symstat/hyperboloid.hpp"
#include "symstat/invariants.hpp"
#include "symstat/sampling.hpp"
#include "symstat/spd.hpp"

#include <cmath>

using namespace symstat;

TEST_CASE("a single point is its own mean") {
    auto space = SpdSpace::make(2);
    RngStream rng(1);
    Point x = random_point(space, rng, 1.0);
    FrechetResult res = frechet_mean(space, {x});
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    CHECK((res.mean.coords - x.coords).norm() == 0.0);
}

TEST_CASE("an empty sample is rejected") {
    auto space = EuclideanSpace::make(2);
    CHECK_THROWS_AS((void)frechet_mean(space, {}), std::domain_error);
}

TEST_CASE("the euclidean mean is the arithmetic mean") {
    auto space = EuclideanSpace::make(3);
    RngStream rng(7);
    std::vector<Point> pts;
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int i = 0; i < 17; ++i) {
        Point p = random_point(space, rng, 2.0);
        acc += p.coords;
        pts.push_back(p);
    }
    Eigen::Vector3d expected = acc / 17.0;
    FrechetResult res = frechet_mean(space, pts);
    CHECK(res.converged);
    CHECK((res.mean.coords - expected).norm() < 1e-9);
}

TEST_CASE("the mean of a matrix and its inverse is the geodesic midpoint") {
    auto space = SpdSpace::make(3);
    RngStream rng(13);
    Point a = random_point(space, rng, 0.9);
    Eigen::MatrixXd ainv_m = space->matrix(a).inverse();
    Point ainv = space->point(0.5 * (ainv_m + ainv_m.transpose()));
    FrechetResult res = frechet_mean(space, {a, ainv});
    CHECK(res.converged);
    Point mid = space->geodesic(a, ainv, 0.5);
    CHECK(space->distance(res.mean, mid) < 1e-7);
    // The midpoint of a point and its inverse is the identity.
    CHECK(space->distance(res.mean, space->origin()) < 1e-7);
}

TEST_CASE("converged results satisfy first-order optimality") {
    auto space = HyperboloidSpace::make(3);
    RngStream rng(19);
    SolverConfig cfg;
    cfg.max_iterations = 1000;
    for (int c = 0; c < 20; ++c) {
        std::vector<Point> pts;
        for (int i = 0; i < 9; ++i) pts.push_back(random_point(space, rng, 1.0));
        FrechetResult res = frechet_mean(space, pts, cfg);
        REQUIRE(res.converged);
        std::vector<TangentVector> logs;
        space->log_batch(res.mean, pts, logs);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(logs.front().vec.size());
        for (const auto& lg : logs) sum += lg.vec;
        // Sum-gradient form: |sum Log| <= n * tolerance.
        CHECK(space->norm(TangentVector{res.mean, sum}) <= 9.0 * cfg.gradient_tolerance);
    }
}

TEST_CASE("solver config is validated") {
    SolverConfig bad;
    bad.gradient_tolerance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SolverConfig{};
    bad.max_iterations = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SolverConfig{};
    bad.step_size = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("shrinkage is an equality on euclidean samples") {
    auto space = EuclideanSpace::make(2);
    RngStream rng(23);
    Point base = random_point(space, rng, 1.0);
    std::vector<Point> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(random_point(space, rng, 1.5));
    ShrinkageCheck check = shrinkage_check(space, base, pts);
    CHECK(check.holds);
    CHECK(std::abs(check.lhs - check.rhs) < 1e-9);
    CHECK_FALSE(check.strict);
}

TEST_CASE("shrinkage is strict on generic spd samples") {
    auto space = SpdSpace::make(2);
    RngStream rng(29);
    Point base = space->origin();
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(random_point(space, rng, 1.0));
    ShrinkageCheck check = shrinkage_check(space, base, pts);
    CHECK(check.holds);
    CHECK(check.strict);
}

TEST_CASE("shrinkage is an equality for points on a geodesic through the base") {
    auto space = HyperboloidSpace::make(2);
    RngStream rng(31);
    Point base = random_point(space, rng, 0.5);
    TangentVector u = random_tangent(space, base, rng, 1.0);
    u = space->scaled(u, 1.0 / space->norm(u));
    std::vector<Point> pts;
    for (double t : {-0.9, -0.2, 0.3, 0.8, 1.4}) {
        pts.push_back(space->exp(base, space->scaled(u, t)));
    }
    ShrinkageCheck check = shrinkage_check(space, base, pts);
    CHECK(check.holds);
    CHECK(std::abs(check.lhs - check.rhs) < 1e-7);
}

TEST_CASE("modulation on flat space brackets one and n=1 is exact") {
    auto space = EuclideanSpace::make(2);
    SymmetricSampler sampler = SymmetricSampler::isotropic_gaussian(space, space->origin(), 1.0);
    ModulationEstimate est = modulation_estimate(space, sampler, 25, 400, 515);
    CHECK(std::abs(est.m_hat - 1.0) <= 3.0 * est.standard_error);
    CHECK(est.standard_error > 0.0);

    ModulationEstimate unit = modulation_estimate(space, sampler, 1, 100, 99);
    CHECK(unit.m_hat == 1.0);
    CHECK(unit.standard_error == 0.0);
}

TEST_CASE("modulation sits below one on the hyperbolic plane") {
    auto space = HyperboloidSpace::make(2);
    SymmetricSampler sampler = SymmetricSampler::isotropic_gaussian(space, space->origin(), 1.0);
    ModulationEstimate est = modulation_estimate(space, sampler, 100, 400, 2027);
    CHECK(est.m_hat + 3.0 * est.standard_error < 1.0);
}

TEST_CASE("modulation rejects infinite-variance samplers") {
    auto space = EuclideanSpace::make(2);
    SymmetricSampler heavy =
        SymmetricSampler::radial(space, space->origin(), RadialLaw::pareto(1.0));
    CHECK_THROWS_AS((void)modulation_estimate(space, heavy, 10, 50, 1), std::invalid_argument);
}

TEST_CASE("modulation is reproducible across worker counts") {
    auto space = SpdSpace::make(2);
    SymmetricSampler sampler = SymmetricSampler::isotropic_gaussian(space, space->origin(), 0.8);
    ModulationEstimate a = modulation_estimate(space, sampler, 20, 60, 4242, {}, 1);
    ModulationEstimate b = modulation_estimate(space, sampler, 20, 60, 4242, {}, 8);
    CHECK(a.m_hat == b.m_hat);
    CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("frechet invariant suite passes") {
    auto results = run_invariant_suite("frechet", 2024);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.pass);
    }
    CHECK(results.size() == 6);
}
