#include "symstat/invariants.hpp"

#include "symstat/euclidean.hpp"
#include "symstat/frechet.hpp"
#include "symstat/hyperboloid.hpp"
#include "symstat/product.hpp"
#include "symstat/sampling.hpp"
#include "symstat/spd.hpp"
#include "symstat/symmetry.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace symstat {

Point random_point(const ManifoldPtr& space, RngStream& rng, double scale) {
    const int k = space->dimension();
    Eigen::VectorXd c(k);
    for (int i = 0; i < k; ++i) c(i) = scale * rng.next_normal();
    Point o = space->origin();
    return space->exp(o, space->tangent_from_coeffs(o, c));
}

TangentVector random_tangent(const ManifoldPtr& space, const Point& base, RngStream& rng,
                             double scale) {
    const int k = space->dimension();
    Eigen::VectorXd c(k);
    for (int i = 0; i < k; ++i) c(i) = scale * rng.next_normal();
    return space->tangent_from_coeffs(base, c);
}

namespace {

double forced_tol(const std::string& name, double tol) {
    const char* inj = std::getenv("SYMSTAT_CHECK_FORCE_FAIL");
    if (inj != nullptr && name == inj) return tol * 1e-30;
    return tol;
}

Eigen::MatrixXd random_gram(int k, RngStream& rng) {
    Eigen::MatrixXd a(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a(i, j) = 0.5 * rng.next_normal();
    return a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(k, k);
}

struct SuiteContext {
    std::uint64_t seed;
    std::vector<InvariantResult> results;

    void record(const std::string& suite, const std::string& name, bool pass,
                const std::string& detail) {
        results.push_back(InvariantResult{suite, name, pass, detail});
    }
};

// All space families exercised by the suites. Gram matrices are drawn from
// the seed so reruns are reproducible.
std::vector<ManifoldPtr> suite_spaces(std::uint64_t seed) {
    RngStream rng(seed, {0x4772616dULL});
    std::vector<ManifoldPtr> spaces;
    spaces.push_back(EuclideanSpace::make(1));
    spaces.push_back(EuclideanSpace::make(2, random_gram(2, rng)));
    spaces.push_back(EuclideanSpace::make(5, random_gram(5, rng)));
    spaces.push_back(HyperboloidSpace::make(2));
    spaces.push_back(HyperboloidSpace::make(5));
    spaces.push_back(SpdSpace::make(2));
    spaces.push_back(SpdSpace::make(3));
    spaces.push_back(ProductSpace::make(
        {EuclideanSpace::make(2, random_gram(2, rng)), HyperboloidSpace::make(2),
         SpdSpace::make(2)}));
    return spaces;
}

// One representative per family, for the quadratic-cost suites.
std::vector<ManifoldPtr> family_spaces(std::uint64_t seed) {
    RngStream rng(seed, {0x46616d73ULL});
    return {EuclideanSpace::make(2, random_gram(2, rng)), HyperboloidSpace::make(2),
            SpdSpace::make(2),
            ProductSpace::make({EuclideanSpace::make(1), HyperboloidSpace::make(2)})};
}

void geometry_suite(SuiteContext& ctx) {
    const std::string suite = "geometry";
    std::vector<ManifoldPtr> spaces = suite_spaces(ctx.seed);

    {
        const double tol = forced_tol("round_trip", 1e-8);
        bool pass = true;
        double worst = 0.0;
        std::string worst_space;
        RngStream rng(ctx.seed, {1});
        for (const auto& space : spaces) {
            for (int c = 0; c < 1000; ++c) {
                Point base = random_point(space, rng, 1.0);
                Point y = random_point(space, rng, 1.0);
                TangentVector v = random_tangent(space, base, rng, 1.0);
                TangentVector back = space->log(base, space->exp(base, v));
                double verr = space->norm(TangentVector{base, back.vec - v.vec}) /
                              (1.0 + space->norm(v));
                double derr = std::abs(space->distance(base, space->exp(base, space->log(base, y))) -
                                       space->distance(base, y));
                double err = std::max(verr, derr);
                if (err > worst) {
                    worst = err;
                    worst_space = space->tag();
                }
                pass = pass && err <= tol;
            }
        }
        std::ostringstream os;
        os << "worst residual " << worst << " (" << worst_space << ")";
        ctx.record(suite, "round_trip", pass, os.str());
    }

    {
        const double tol = forced_tol("metric_axioms", 1e-10);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {2});
        for (const auto& space : spaces) {
            for (int c = 0; c < 1000; ++c) {
                Point x = random_point(space, rng, 1.0);
                Point y = random_point(space, rng, 1.0);
                Point z = random_point(space, rng, 1.0);
                double sym = std::abs(space->distance(x, y) - space->distance(y, x));
                double self = space->distance(x, x);
                double tri = space->distance(x, z) - space->distance(x, y) - space->distance(y, z);
                double err = std::max({sym, self, tri});
                worst = std::max(worst, err);
                pass = pass && err <= tol;
            }
        }
        std::ostringstream os;
        os << "worst violation " << worst;
        ctx.record(suite, "metric_axioms", pass, os.str());
    }

    {
        const double tol = forced_tol("constraint_preservation", 1.0);
        bool pass = true;
        int failures = 0;
        RngStream rng(ctx.seed, {3});
        for (const auto& space : spaces) {
            Point x = random_point(space, rng, 1.0);
            Point anchor = space->origin();
            for (int c = 0; c < 100; ++c) {
                // Wander with small steps, pulled back toward the origin so
                // the radius stays in the well-conditioned range.
                TangentVector v = random_tangent(space, x, rng, 0.25);
                TangentVector home = space->log(x, anchor);
                x = space->exp(x, TangentVector{x, v.vec + 0.1 * home.vec});
                try {
                    space->validate_point(x);
                } catch (const std::exception&) {
                    ++failures;
                    pass = false;
                }
            }
        }
        pass = pass && tol >= 1.0;  // force-fail hook
        std::ostringstream os;
        os << failures << " constraint violations over 100-step chains";
        ctx.record(suite, "constraint_preservation", pass, os.str());
    }

    {
        const double slack = forced_tol("geodesic_convexity", 1e-4);
        const double flat_tol = forced_tol("geodesic_convexity", 1e-6);
        const double h = 1e-3;
        bool pass = true;
        double worst_curved = std::numeric_limits<double>::infinity();
        double worst_flat = 0.0;
        RngStream rng(ctx.seed, {4});
        for (const auto& space : spaces) {
            bool flat = space->tag().rfind("euclidean", 0) == 0;
            for (int c = 0; c < 200; ++c) {
                Point x = random_point(space, rng, 0.8);
                Point y = random_point(space, rng, 0.8);
                TangentVector u = random_tangent(space, x, rng, 1.0);
                double un = space->norm(u);
                if (un < 1e-6) continue;
                u = space->scaled(u, 1.0 / un);  // unit speed
                double t0 = 0.2 + 0.6 * rng.next_double();
                auto f = [&](double t) {
                    Point g = space->exp(x, space->scaled(u, t));
                    double d = space->distance(g, y);
                    return d * d;
                };
                double second = (f(t0 + h) - 2.0 * f(t0) + f(t0 - h)) / (h * h);
                if (flat) {
                    worst_flat = std::max(worst_flat, std::abs(second - 2.0));
                    pass = pass && std::abs(second - 2.0) <= flat_tol;
                } else {
                    worst_curved = std::min(worst_curved, second - 2.0);
                    pass = pass && second >= 2.0 - slack;
                }
            }
        }
        std::ostringstream os;
        os << "min curved margin " << worst_curved << ", max flat deviation " << worst_flat;
        ctx.record(suite, "geodesic_convexity", pass, os.str());
    }
}

void symmetry_suite(SuiteContext& ctx) {
    const std::string suite = "symmetry";
    std::vector<ManifoldPtr> spaces = family_spaces(ctx.seed);

    {
        const double tol = forced_tol("isometry", 1e-8);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {11});
        for (const auto& space : spaces) {
            for (int c = 0; c < 300; ++c) {
                GeodesicSymmetry s(space, random_point(space, rng, 0.8));
                Point x = random_point(space, rng, 1.0);
                Point y = random_point(space, rng, 1.0);
                double err = std::abs(space->distance(s(x), s(y)) - space->distance(x, y));
                worst = std::max(worst, err);
                pass = pass && err <= tol;
            }
        }
        std::ostringstream os;
        os << "worst distance drift " << worst;
        ctx.record(suite, "isometry", pass, os.str());
    }

    {
        const double tol = forced_tol("involution", 1e-8);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {12});
        for (const auto& space : spaces) {
            for (int c = 0; c < 300; ++c) {
                GeodesicSymmetry s(space, random_point(space, rng, 0.8));
                Point x = random_point(space, rng, 1.0);
                double err = space->distance(s(s(x)), x);
                worst = std::max(worst, err);
                pass = pass && err <= tol;
            }
        }
        std::ostringstream os;
        os << "worst return distance " << worst;
        ctx.record(suite, "involution", pass, os.str());
    }

    {
        const double tol = forced_tol("displacement", 1e-6);
        bool pass = true;
        double worst = std::numeric_limits<double>::infinity();
        RngStream rng(ctx.seed, {13});
        for (const auto& space : spaces) {
            Point mu1 = random_point(space, rng, 0.4);
            TangentVector dir = random_tangent(space, mu1, rng, 1.0);
            double dn = space->norm(dir);
            Point mu2 = space->exp(mu1, space->scaled(dir, 0.6 / std::max(dn, 1e-12)));
            std::vector<Point> pts;
            for (int c = 0; c < 50; ++c) pts.push_back(random_point(space, rng, 1.0));
            DisplacementReport report = displacement_bound_check(space, mu1, mu2, pts, 10);
            for (const DisplacementRow& row : report.rows) {
                double margin = row.min_displacement - row.bound;
                worst = std::min(worst, margin);
                pass = pass && margin >= -tol;
            }
        }
        std::ostringstream os;
        os << "worst displacement margin " << worst;
        ctx.record(suite, "displacement", pass, os.str());
    }
}

void frechet_suite(SuiteContext& ctx) {
    const std::string suite = "frechet";
    std::vector<ManifoldPtr> spaces = family_spaces(ctx.seed);

    {
        const double tol = forced_tol("first_order_optimality", 1e-9);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {21});
        SolverConfig cfg;
        cfg.gradient_tolerance = tol;
        cfg.max_iterations = 1000;
        for (const auto& space : spaces) {
            for (int c = 0; c < 50; ++c) {
                std::vector<Point> pts;
                for (int i = 0; i < 8; ++i) pts.push_back(random_point(space, rng, 1.0));
                FrechetResult res = frechet_mean(space, pts, cfg);
                pass = pass && res.converged && res.gradient_norm <= tol;
                worst = std::max(worst, res.gradient_norm);
            }
        }
        std::ostringstream os;
        os << "worst averaged gradient " << worst;
        ctx.record(suite, "first_order_optimality", pass, os.str());
    }

    {
        const double tol = forced_tol("shrinkage", 1e-8);
        const double eq_tol = forced_tol("shrinkage", 1e-6);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {22});
        SolverConfig cfg;
        cfg.max_iterations = 1000;
        for (const auto& space : spaces) {
            bool flat = space->tag().rfind("euclidean", 0) == 0;
            for (int c = 0; c < 1000; ++c) {
                Point base = random_point(space, rng, 0.8);
                std::vector<Point> pts;
                int n = 3 + static_cast<int>(rng.next_u64() % 5);
                for (int i = 0; i < n; ++i) pts.push_back(random_point(space, rng, 0.8));
                ShrinkageCheck check = shrinkage_check(space, base, pts, cfg);
                pass = pass && check.holds && check.lhs <= check.rhs + tol;
                worst = std::max(worst, check.lhs - check.rhs);
                if (flat) {
                    pass = pass && std::abs(check.lhs - check.rhs) <= eq_tol;
                }
            }
        }
        std::ostringstream os;
        os << "worst lhs-rhs " << worst;
        ctx.record(suite, "shrinkage", pass, os.str());
    }

    {
        // Points on a geodesic through the base: equality case.
        const double tol = forced_tol("shrinkage_collinear", 1e-6);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {23});
        SolverConfig cfg;
        cfg.max_iterations = 1000;
        for (const auto& space : spaces) {
            for (int c = 0; c < 100; ++c) {
                Point base = random_point(space, rng, 0.5);
                TangentVector u = random_tangent(space, base, rng, 1.0);
                double un = space->norm(u);
                if (un < 1e-9) continue;
                u = space->scaled(u, 1.0 / un);
                std::vector<Point> pts;
                for (int i = 0; i < 5; ++i) {
                    double t = 2.0 * rng.next_double() - 1.0;
                    pts.push_back(space->exp(base, space->scaled(u, t)));
                }
                ShrinkageCheck check = shrinkage_check(space, base, pts, cfg);
                double gap = std::abs(check.lhs - check.rhs);
                worst = std::max(worst, gap);
                pass = pass && check.holds && gap <= tol;
            }
        }
        std::ostringstream os;
        os << "worst collinear gap " << worst;
        ctx.record(suite, "shrinkage_collinear", pass, os.str());
    }

    {
        const double tol = forced_tol("symmetry_equivariance", 1e-7);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {24});
        SolverConfig cfg;
        cfg.gradient_tolerance = 1e-13;
        cfg.max_iterations = 2000;
        for (const auto& space : spaces) {
            for (int c = 0; c < 40; ++c) {
                GeodesicSymmetry s(space, random_point(space, rng, 0.6));
                std::vector<Point> pts;
                for (int i = 0; i < 6; ++i) pts.push_back(random_point(space, rng, 0.8));
                FrechetResult plain = frechet_mean(space, pts, cfg);
                std::vector<Point> mapped;
                mapped.reserve(pts.size());
                for (const Point& p : pts) mapped.push_back(s(p));
                FrechetResult reflected = frechet_mean(space, mapped, cfg);
                double err = space->distance(reflected.mean, s(plain.mean));
                worst = std::max(worst, err);
                pass = pass && err <= tol;
            }
        }
        std::ostringstream os;
        os << "worst equivariance gap " << worst;
        ctx.record(suite, "symmetry_equivariance", pass, os.str());
    }

    {
        const double tol = forced_tol("permutation_invariance", 1e-10);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {25});
        SolverConfig cfg;
        cfg.gradient_tolerance = 1e-13;
        cfg.max_iterations = 2000;
        for (const auto& space : spaces) {
            for (int c = 0; c < 40; ++c) {
                std::vector<Point> pts;
                for (int i = 0; i < 7; ++i) pts.push_back(random_point(space, rng, 0.8));
                FrechetResult a = frechet_mean(space, pts, cfg);
                std::reverse(pts.begin(), pts.end());
                std::rotate(pts.begin(), pts.begin() + 2, pts.end());
                FrechetResult b = frechet_mean(space, pts, cfg);
                double err = space->distance(a.mean, b.mean);
                worst = std::max(worst, err);
                pass = pass && err <= tol;
            }
        }
        std::ostringstream os;
        os << "worst reorder drift " << worst;
        ctx.record(suite, "permutation_invariance", pass, os.str());
    }

    {
        // Modulation never exceeds 1 for finite-variance samplers.
        const double margin = forced_tol("modulation_bound", 1.0);
        bool pass = true;
        double worst = 0.0;
        std::vector<ManifoldPtr> mod_spaces = {EuclideanSpace::make(2),
                                               HyperboloidSpace::make(2), SpdSpace::make(2)};
        for (std::size_t i = 0; i < mod_spaces.size(); ++i) {
            const auto& space = mod_spaces[i];
            SymmetricSampler sampler =
                SymmetricSampler::isotropic_gaussian(space, space->origin(), 1.0);
            ModulationEstimate est =
                modulation_estimate(space, sampler, 16, 300, ctx.seed + i, {}, 0);
            double excess = est.m_hat - 1.0 - 3.0 * est.standard_error * margin;
            worst = std::max(worst, excess);
            pass = pass && excess <= 0.0;
        }
        std::ostringstream os;
        os << "worst excess over 1 " << worst;
        ctx.record(suite, "modulation_bound", pass, os.str());
    }
}

void sampling_suite(SuiteContext& ctx) {
    const std::string suite = "sampling";

    {
        const double sigma = forced_tol("sign_symmetry", 3.0);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {31});
        std::vector<std::pair<ManifoldPtr, SymmetricSampler>> samplers;
        {
            ManifoldPtr h2 = HyperboloidSpace::make(2);
            samplers.emplace_back(
                h2, SymmetricSampler::isotropic_gaussian(h2, h2->origin(), 1.0));
            // Radial draws on curved spaces need tails that stay inside the
            // representable radius; the heavy-tailed law runs on flat space.
            ManifoldPtr spd2 = SpdSpace::make(2);
            samplers.emplace_back(
                spd2, SymmetricSampler::radial(spd2, spd2->origin(), RadialLaw::chi(4)));
            ManifoldPtr e3 = EuclideanSpace::make(3);
            samplers.emplace_back(
                e3, SymmetricSampler::radial(e3, e3->origin(), RadialLaw::student(1.5)));
        }
        const std::size_t N = 20000;
        const double half_width = sigma * std::sqrt(0.25 / static_cast<double>(N));
        for (std::size_t si = 0; si < samplers.size(); ++si) {
            const auto& space = samplers[si].first;
            const auto& sampler = samplers[si].second;
            for (int dir = 0; dir < 10; ++dir) {
                TangentVector u = random_tangent(space, sampler.center(), rng, 1.0);
                double un = space->norm(u);
                if (un < 1e-9) continue;
                u = space->scaled(u, 1.0 / un);
                RngStream draw = rng.split(1000 * (si + 1) + dir);
                double freq = sign_probability_check(sampler, u, N, draw);
                double dev = std::abs(freq - 0.5);
                worst = std::max(worst, dev);
                pass = pass && dev <= half_width;
            }
        }
        std::ostringstream os;
        os << "worst |freq-1/2| " << worst << " (allowance " << half_width << ")";
        ctx.record(suite, "sign_symmetry", pass, os.str());
    }

    {
        const double tol = forced_tol("truncation_idempotence", 1e-12);
        bool pass = true;
        RngStream rng(ctx.seed, {32});
        ManifoldPtr space = SpdSpace::make(2);
        Point mu = space->origin();
        SymmetricSampler sampler = SymmetricSampler::isotropic_gaussian(space, mu, 1.5);
        for (int c = 0; c < 300; ++c) {
            double level = 0.5 + 3.0 * rng.next_double();
            TruncationScheme scheme(level, mu);
            Point x = sampler.sample(rng);
            Point t1 = truncate(scheme, space, x);
            Point t2 = truncate(scheme, space, t1);
            pass = pass && space->distance(t1, t2) <= tol;
            pass = pass && space->distance(t1, mu) <= level + tol;
        }
        ctx.record(suite, "truncation_idempotence", pass, "truncate o truncate = truncate");
    }

    {
        const double tol = forced_tol("tail_monotonicity", 1e-12);
        bool pass = true;
        std::vector<RadialLaw> laws = {RadialLaw::chi(3), RadialLaw::loglog_tail(),
                                       RadialLaw::pareto(1.0), RadialLaw::student(1.5)};
        for (const RadialLaw& law : laws) {
            double prev = law.survival(0.0);
            pass = pass && prev <= 1.0 + tol && prev >= -tol;
            for (int i = 1; i <= 1000; ++i) {
                double t = 20.0 * i / 1000.0;
                double s = law.survival(t);
                pass = pass && s <= prev + tol && s >= -tol && s <= 1.0 + tol;
                prev = s;
            }
        }
        ctx.record(suite, "tail_monotonicity", pass, "4 analytic tails on a 1000-point grid");
    }

    {
        const double tol = forced_tol("chernoff_domination", 0.0);
        bool pass = true;
        double worst = std::numeric_limits<double>::infinity();
        for (int m : {1, 3, 6, 10}) {
            boost::math::chi_squared_distribution<double> dist(m);
            for (int i = 1; i <= 100; ++i) {
                double x = 0.5 * i;
                double margin = chernoff_chisq_bound(m, x) -
                                boost::math::cdf(boost::math::complement(dist, x));
                worst = std::min(worst, margin);
                pass = pass && margin >= -tol;
            }
        }
        std::ostringstream os;
        os << "min bound-minus-survival " << worst;
        ctx.record(suite, "chernoff_domination", pass, os.str());
    }

    {
        const double tol = forced_tol("quantile_inversion", 1e-10);
        bool pass = true;
        double worst = 0.0;
        RngStream rng(ctx.seed, {33});
        RadialLaw law = RadialLaw::loglog_tail();
        for (int c = 0; c < 1000; ++c) {
            double u = rng.next_double_open();
            double t = loglog_tail_quantile(u);
            double err = std::abs(law.survival(t) - u);
            worst = std::max(worst, err);
            pass = pass && err <= tol;
        }
        std::ostringstream os;
        os << "worst |S(Q(u)) - u| " << worst;
        ctx.record(suite, "quantile_inversion", pass, os.str());
    }

    {
        const double tol = forced_tol("tail_moment_identity", 1e-6);
        bool pass = true;
        double worst = 0.0;
        // Uniform(0,1) second moment, exponential(1) first moment, constant
        // step survival.
        double u2 = moment_via_tail(
            [](double t) { return t >= 1.0 ? 0.0 : 1.0 - t; }, 2.0, 1.0);
        worst = std::max(worst, std::abs(u2 - 1.0 / 3.0));
        double e1 = moment_via_tail([](double t) { return std::exp(-t); }, 1.0, 40.0);
        worst = std::max(worst, std::abs(e1 - 1.0));
        double c3 = moment_via_tail(
            [](double t) { return t < 0.75 ? 1.0 : 0.0; }, 3.0, 2.0);
        worst = std::max(worst, std::abs(c3 - 0.75 * 0.75 * 0.75));
        pass = worst <= tol;
        std::ostringstream os;
        os << "worst closed-form gap " << worst;
        ctx.record(suite, "tail_moment_identity", pass, os.str());
    }
}

}  // namespace

bool is_known_suite(const std::string& suite) {
    return suite == "geometry" || suite == "symmetry" || suite == "frechet" ||
           suite == "sampling" || suite == "all";
}

std::vector<InvariantResult> run_invariant_suite(const std::string& suite, std::uint64_t seed) {
    if (!is_known_suite(suite)) {
        throw std::invalid_argument("unknown invariant suite: " + suite);
    }
    SuiteContext ctx;
    ctx.seed = seed;
    if (suite == "geometry" || suite == "all") geometry_suite(ctx);
    if (suite == "symmetry" || suite == "all") symmetry_suite(ctx);
    if (suite == "frechet" || suite == "all") frechet_suite(ctx);
    if (suite == "sampling" || suite == "all") sampling_suite(ctx);
    return ctx.results;
}

}  // namespace symstat
