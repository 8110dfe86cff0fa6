#pragma once

#include "symstat/manifold.hpp"
#include "symstat/rng.hpp"

#include <functional>
#include <optional>

namespace symstat {

// Distribution of the distance-to-center for radially symmetric samplers.
struct RadialLaw {
    enum class Kind {
        chi,          // length of a df-dimensional standard normal
        loglog_tail,  // survival e / (t log t) for t >= e, 1 below
        pareto,       // survival t^{-index} for t >= 1, scale fixed to 1
        student,      // |T| for a Student-t radius with nu degrees of freedom
    };

    static RadialLaw chi(int df);
    static RadialLaw loglog_tail();
    static RadialLaw pareto(double index);
    static RadialLaw student(double nu);

    double sample(RngStream& rng) const;
    // P(radius > t); analytic (chi and student via their distribution
    // functions, the others in closed form).
    double survival(double t) const;

    bool finite_first_moment() const;
    bool finite_second_moment() const;

    Kind kind = Kind::chi;
    double param = 1.0;  // df, index, or nu
};

// Quantile of the loglog tail law: the t >= e with e/(t log t) = u, solved
// by safeguarded Newton on t log t = e/u to relative accuracy 1e-12.
// Accepts u in (0, 1]; u = 1 returns e.
double loglog_tail_quantile(double u);

// Chernoff upper bound 2^{m/2} exp(-x/4) for the chi-square survival
// P(chi2_m > x); valid for every m >= 1 and x > 0.
double chernoff_chisq_bound(int m, double x);

// E|Y|^p = integral of p t^{p-1} P(|Y| > t) dt over [0, upper_limit],
// by adaptive quadrature with absolute tolerance 1e-8. The tail beyond
// upper_limit is dropped; the truncation error is bounded by
// p * upper_limit^{p-1} * survival(upper_limit) * (true upper tail mass),
// so pick upper_limit where the survival is negligible. Throws when the
// survival is found non-monotone on the inspection grid.
double moment_via_tail(const std::function<double(double)>& survival, double p,
                       double upper_limit);

struct WilsonInterval {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials);

// A distribution on a manifold, symmetric about a declared center by
// construction: the tangent draw in an orthonormal basis at the center is
// symmetric under negation, and the geodesic symmetry about the center acts
// as negation in those coordinates.
class SymmetricSampler {
public:
    // Gaussian tangent law with the given covariance on tangent
    // coefficients. A zero covariance degenerates to the center itself.
    static SymmetricSampler gaussian(ManifoldPtr space, Point center,
                                     const Eigen::MatrixXd& covariance);
    static SymmetricSampler isotropic_gaussian(ManifoldPtr space, Point center, double sigma);
    // Radius from the radial law, direction uniform on the unit sphere of
    // the tangent space at the center.
    static SymmetricSampler radial(ManifoldPtr space, Point center, const RadialLaw& law);

    Point sample(RngStream& rng) const;
    Eigen::VectorXd sample_tangent_coeffs(RngStream& rng) const;

    const ManifoldPtr& space() const { return space_; }
    const Point& center() const { return center_; }

    // P(d(X, center) > t) when available in closed form.
    const std::optional<std::function<double(double)>>& tail_function() const { return tail_; }

    bool finite_first_moment() const { return finite_first_; }
    bool finite_second_moment() const { return finite_second_; }

private:
    SymmetricSampler(ManifoldPtr space, Point center);

    ManifoldPtr space_;
    Point center_;
    Eigen::MatrixXd cov_sqrt_;  // gaussian only
    std::optional<RadialLaw> radial_;
    std::optional<std::function<double(double)>> tail_;
    bool finite_first_ = true;
    bool finite_second_ = true;
};

// Truncation at level n about a center: points farther than n collapse to
// the center, everything else (the boundary included) passes through.
struct TruncationScheme {
    double level = 1.0;
    Point center;

    TruncationScheme(double level, Point center);
};

Point truncate(const TruncationScheme& scheme, const ManifoldPtr& space, const Point& x);

// Empirical frequency of Y >= 0 for the scalar projection
// Y = <direction, Log_center(X)> over `samples` draws. For a symmetric
// sampler the projection satisfies P(Y >= 0) >= 1/2.
double sign_probability_check(const SymmetricSampler& sampler, const TangentVector& direction,
                              std::size_t samples, RngStream& rng);

struct TailPoint {
    double level = 0.0;
    double value = 0.0;  // level * P(d(X, center) > level)
    double lower = 0.0;
    double upper = 0.0;
    bool analytic = false;
};

// Scaled tail functional n P(d(X, mu) > n) at the given levels. Uses the
// sampler's analytic tail when present (degenerate interval), otherwise a
// Monte Carlo estimate with a 95% Wilson interval scaled by the level.
std::vector<TailPoint> empirical_tail(const SymmetricSampler& sampler,
                                      const std::vector<double>& levels, std::size_t samples,
                                      RngStream& rng);

}  // namespace symstat
