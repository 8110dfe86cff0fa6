#include "symstat/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace symstat {

namespace {

constexpr double kE = 2.718281828459045235;

// Marsaglia-Tsang gamma(shape, 1) sampler; the shape < 1 case boosts
// through gamma(shape + 1) * U^{1/shape}.
double sample_gamma(double shape, RngStream& rng) {
    if (shape < 1.0) {
        double u = rng.next_double_open();
        return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.next_normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.next_double_open();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            return d * v;
        }
    }
}

double chisq_survival(double df, double x) {
    boost::math::chi_squared_distribution<double> dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double student_abs_survival(double nu, double t) {
    if (t <= 0.0) return 1.0;
    boost::math::students_t_distribution<double> dist(nu);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

}  // namespace

RadialLaw RadialLaw::chi(int df) {
    if (df < 1) throw std::invalid_argument("chi radial law needs df >= 1");
    return RadialLaw{Kind::chi, static_cast<double>(df)};
}

RadialLaw RadialLaw::loglog_tail() { return RadialLaw{Kind::loglog_tail, 0.0}; }

RadialLaw RadialLaw::pareto(double index) {
    if (!(index > 0.0)) throw std::invalid_argument("pareto radial law needs index > 0");
    return RadialLaw{Kind::pareto, index};
}

RadialLaw RadialLaw::student(double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("student radial law needs nu > 0");
    return RadialLaw{Kind::student, nu};
}

double RadialLaw::sample(RngStream& rng) const {
    switch (kind) {
        case Kind::chi: {
            double s = 0.0;
            int df = static_cast<int>(param);
            for (int i = 0; i < df; ++i) {
                double z = rng.next_normal();
                s += z * z;
            }
            return std::sqrt(s);
        }
        case Kind::loglog_tail:
            return loglog_tail_quantile(rng.next_double_open());
        case Kind::pareto:
            return std::pow(rng.next_double_open(), -1.0 / param);
        case Kind::student: {
            double z = rng.next_normal();
            double v = 2.0 * sample_gamma(0.5 * param, rng);  // chi-square(nu)
            return std::abs(z / std::sqrt(v / param));
        }
    }
    throw std::logic_error("unknown radial law");
}

double RadialLaw::survival(double t) const {
    if (t <= 0.0) return 1.0;
    switch (kind) {
        case Kind::chi:
            return chisq_survival(param, t * t);
        case Kind::loglog_tail:
            return t < kE ? 1.0 : std::min(1.0, kE / (t * std::log(t)));
        case Kind::pareto:
            return t < 1.0 ? 1.0 : std::pow(t, -param);
        case Kind::student:
            return student_abs_survival(param, t);
    }
    throw std::logic_error("unknown radial law");
}

bool RadialLaw::finite_first_moment() const {
    switch (kind) {
        case Kind::chi: return true;
        case Kind::loglog_tail: return false;
        case Kind::pareto: return param > 1.0;
        case Kind::student: return param > 1.0;
    }
    return false;
}

bool RadialLaw::finite_second_moment() const {
    switch (kind) {
        case Kind::chi: return true;
        case Kind::loglog_tail: return false;
        case Kind::pareto: return param > 2.0;
        case Kind::student: return param > 2.0;
    }
    return false;
}

double loglog_tail_quantile(double u) {
    if (!(u > 0.0) || u > 1.0) {
        throw std::domain_error("loglog_tail_quantile: u must lie in (0, 1]");
    }
    if (u == 1.0) return kE;
    // Solve t log t = e/u on [e, e/u]; g is increasing there.
    const double target = kE / u;
    double lo = kE;
    double hi = std::max(kE, target);
    double t = std::min(hi, std::max(lo, target / std::log(std::max(target, kE))));
    for (int iter = 0; iter < 200; ++iter) {
        double g = t * std::log(t) - target;
        if (g > 0.0) {
            hi = t;
        } else {
            lo = t;
        }
        double step = g / (std::log(t) + 1.0);
        double next = t - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * t) {
            t = next;
            break;
        }
        t = next;
    }
    return t;
}

double chernoff_chisq_bound(int m, double x) {
    if (m < 1) throw std::domain_error("chernoff_chisq_bound: m must be >= 1");
    if (!(x > 0.0)) throw std::domain_error("chernoff_chisq_bound: x must be > 0");
    return std::exp2(0.5 * m) * std::exp(-0.25 * x);
}

double moment_via_tail(const std::function<double(double)>& survival, double p,
                       double upper_limit) {
    if (!(p > 0.0)) throw std::invalid_argument("moment_via_tail: p must be > 0");
    if (!(upper_limit > 0.0) || !std::isfinite(upper_limit)) {
        throw std::invalid_argument("moment_via_tail: upper_limit must be finite and > 0");
    }
    // Monotonicity inspection grid.
    constexpr int kGrid = 1024;
    double prev = survival(0.0);
    if (prev > 1.0 + 1e-12 || prev < -1e-12) {
        throw std::invalid_argument("moment_via_tail: survival must take values in [0, 1]");
    }
    for (int i = 1; i <= kGrid; ++i) {
        double t = upper_limit * static_cast<double>(i) / kGrid;
        double s = survival(t);
        if (s > prev + 1e-12) {
            throw std::invalid_argument("moment_via_tail: survival is not nonincreasing");
        }
        prev = s;
    }
    auto integrand = [&](double t) {
        return p * std::pow(t, p - 1.0) * survival(t);
    };
    // Depth 30 localizes step discontinuities to intervals of width
    // ~upper_limit * 2^-30, keeping the absolute error under 1e-8.
    double error = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, upper_limit, 30, 1e-12, &error);
    return value;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: needs trials > 0");
    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return WilsonInterval{phat, std::max(0.0, center - half), std::min(1.0, center + half)};
}

SymmetricSampler::SymmetricSampler(ManifoldPtr space, Point center)
    : space_(std::move(space)), center_(std::move(center)) {
    if (!space_) throw std::invalid_argument("sampler needs a space");
    space_->require_point(center_, "sampler");
}

SymmetricSampler SymmetricSampler::gaussian(ManifoldPtr space, Point center,
                                            const Eigen::MatrixXd& covariance) {
    SymmetricSampler s(std::move(space), std::move(center));
    const int k = s.space_->dimension();
    if (covariance.rows() != k || covariance.cols() != k) {
        throw std::invalid_argument("sampler covariance has wrong shape");
    }
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + covariance.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("sampler covariance must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (covariance + covariance.transpose()));
    if (eig.eigenvalues().minCoeff() < -1e-12 * (1.0 + covariance.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("sampler covariance must be positive semidefinite");
    }
    Eigen::VectorXd d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    s.cov_sqrt_ = eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
    // Isotropic covariance sigma^2 I gives distance sigma * chi(k).
    bool isotropic = covariance.isApprox(
        covariance(0, 0) * Eigen::MatrixXd::Identity(k, k), 1e-12);
    if (isotropic && covariance(0, 0) > 0.0) {
        double sigma = std::sqrt(covariance(0, 0));
        s.tail_ = [sigma, k](double t) { return chisq_survival(k, (t / sigma) * (t / sigma)); };
    }
    return s;
}

SymmetricSampler SymmetricSampler::isotropic_gaussian(ManifoldPtr space, Point center,
                                                      double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("sampler sigma must be nonnegative");
    const int k = space->dimension();
    return gaussian(std::move(space), std::move(center),
                    sigma * sigma * Eigen::MatrixXd::Identity(k, k));
}

SymmetricSampler SymmetricSampler::radial(ManifoldPtr space, Point center,
                                          const RadialLaw& law) {
    SymmetricSampler s(std::move(space), std::move(center));
    s.radial_ = law;
    s.tail_ = [law](double t) { return law.survival(t); };
    s.finite_first_ = law.finite_first_moment();
    s.finite_second_ = law.finite_second_moment();
    return s;
}

Eigen::VectorXd SymmetricSampler::sample_tangent_coeffs(RngStream& rng) const {
    const int k = space_->dimension();
    Eigen::VectorXd z(k);
    for (int i = 0; i < k; ++i) z(i) = rng.next_normal();
    if (radial_) {
        double r = radial_->sample(rng);
        double zn = z.norm();
        // A fresh direction is drawn on the measure-zero event |z| = 0.
        while (zn == 0.0) {
            for (int i = 0; i < k; ++i) z(i) = rng.next_normal();
            zn = z.norm();
        }
        return (r / zn) * z;
    }
    return cov_sqrt_ * z;
}

Point SymmetricSampler::sample(RngStream& rng) const {
    Eigen::VectorXd c = sample_tangent_coeffs(rng);
    return space_->exp(center_, space_->tangent_from_coeffs(center_, c));
}

TruncationScheme::TruncationScheme(double level, Point center)
    : level(level), center(std::move(center)) {
    if (!(level > 0.0)) throw std::invalid_argument("truncation level must be > 0");
}

Point truncate(const TruncationScheme& scheme, const ManifoldPtr& space, const Point& x) {
    space->require_point(x, "truncate");
    space->require_point(scheme.center, "truncate");
    // Non-strict at the boundary: a point exactly at the level passes.
    return space->distance(x, scheme.center) <= scheme.level ? x : scheme.center;
}

double sign_probability_check(const SymmetricSampler& sampler, const TangentVector& direction,
                              std::size_t samples, RngStream& rng) {
    if (samples < 1000) throw std::invalid_argument("sign check needs at least 1000 samples");
    const ManifoldPtr& space = sampler.space();
    std::size_t nonneg = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        Point x = sampler.sample(rng);
        TangentVector lg = space->log(sampler.center(), x);
        if (space->inner(direction, lg) >= 0.0) ++nonneg;
    }
    return static_cast<double>(nonneg) / static_cast<double>(samples);
}

std::vector<TailPoint> empirical_tail(const SymmetricSampler& sampler,
                                      const std::vector<double>& levels, std::size_t samples,
                                      RngStream& rng) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0) || (i > 0 && levels[i] <= levels[i - 1])) {
            throw std::invalid_argument("tail levels must be positive and increasing");
        }
    }
    std::vector<TailPoint> out;
    out.reserve(levels.size());
    if (sampler.tail_function()) {
        const auto& tail = *sampler.tail_function();
        for (double n : levels) {
            double v = n * tail(n);
            out.push_back(TailPoint{n, v, v, v, true});
        }
        return out;
    }
    // Monte Carlo path: intervals need volume to mean anything.
    if (samples < 10000) {
        throw std::invalid_argument("empirical tail estimation needs at least 1e4 samples");
    }
    // One pooled set of distance draws serves every level.
    std::vector<double> dists(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        Point x = sampler.sample(rng);
        dists[i] = sampler.space()->distance(x, sampler.center());
    }
    for (double n : levels) {
        std::size_t count = 0;
        for (double d : dists) {
            if (d > n) ++count;
        }
        WilsonInterval w = wilson_interval(count, samples);
        out.push_back(TailPoint{n, n * w.estimate, n * w.lower, n * w.upper, false});
    }
    return out;
}

}  // namespace symstat
