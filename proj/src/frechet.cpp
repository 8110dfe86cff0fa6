#include "symstat/frechet.hpp"

#include "symstat/parallel.hpp"
#include "symstat/sampling.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace symstat {

void SolverConfig::validate() const {
    if (!(gradient_tolerance > 0.0)) {
        throw std::invalid_argument("solver gradient_tolerance must be > 0");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("solver max_iterations must be >= 1");
    }
    if (!(step_size > 0.0) || step_size > 1.0) {
        throw std::invalid_argument("solver step_size must lie in (0, 1]");
    }
}

namespace {

struct Objective {
    double value = 0.0;             // sum of squared distances
    Eigen::VectorXd gradient_vec;   // averaged log vector
    double gradient_norm = 0.0;     // norm of the averaged log
};

Objective evaluate(const ManifoldPtr& space, const Point& at, const std::vector<Point>& points,
                   std::vector<TangentVector>& scratch) {
    space->log_batch(at, points, scratch);
    Objective obj;
    obj.gradient_vec = Eigen::VectorXd::Zero(scratch.front().vec.size());
    for (const TangentVector& lg : scratch) {
        obj.value += space->inner(lg, lg);
        obj.gradient_vec += lg.vec;
    }
    obj.gradient_vec /= static_cast<double>(points.size());
    TangentVector avg{at, obj.gradient_vec};
    obj.gradient_norm = space->norm(avg);
    return obj;
}

}  // namespace

FrechetResult frechet_mean(const ManifoldPtr& space, const std::vector<Point>& points,
                           const SolverConfig& config) {
    if (!space) throw std::invalid_argument("frechet_mean needs a space");
    if (points.empty()) throw std::domain_error("frechet_mean needs at least one point");
    config.validate();
    for (const Point& p : points) space->require_point(p, "frechet_mean");

    if (points.size() == 1) {
        return FrechetResult{points.front(), 0.0, 0, true};
    }

    Point current = points.front();
    std::vector<TangentVector> scratch;
    Objective obj = evaluate(space, current, points, scratch);

    // Objective values carry accumulation noise of order n*eps relative, so
    // only increases above that margin count as real.
    const double noise = 8.0 * static_cast<double>(points.size()) *
                         std::numeric_limits<double>::epsilon();

    // Monotone safeguard: a step that increases the objective is halved and
    // retried, and the halved step persists across iterations. On widely
    // spread samples the full fixed-point step overshoots every time, so
    // re-trying it each iteration would halve forever.
    double step = config.step_size;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        if (obj.gradient_norm <= config.gradient_tolerance) {
            return FrechetResult{current, obj.gradient_norm, iter, true};
        }
        Point candidate = space->exp(current, TangentVector{current, step * obj.gradient_vec});
        Objective cand = evaluate(space, candidate, points, scratch);
        int halvings = 0;
        while (cand.value > obj.value * (1.0 + noise) && halvings < 60) {
            step *= 0.5;
            ++halvings;
            candidate = space->exp(current, TangentVector{current, step * obj.gradient_vec});
            cand = evaluate(space, candidate, points, scratch);
        }
        if (cand.value > obj.value * (1.0 + noise)) break;  // stuck at machine scale
        current = candidate;
        obj = cand;
    }
    bool converged = obj.gradient_norm <= config.gradient_tolerance;
    return FrechetResult{current, obj.gradient_norm, iter, converged};
}

ShrinkageCheck shrinkage_check(const ManifoldPtr& space, const Point& base,
                               const std::vector<Point>& points, const SolverConfig& config) {
    if (points.empty()) throw std::domain_error("shrinkage_check needs at least one point");
    FrechetResult res = frechet_mean(space, points, config);
    if (!res.converged) {
        throw std::runtime_error("shrinkage_check: mean solver did not converge");
    }
    ShrinkageCheck check;
    check.lhs = space->norm(space->log(base, res.mean));
    Eigen::VectorXd avg;
    {
        std::vector<TangentVector> logs;
        space->log_batch(base, points, logs);
        avg = Eigen::VectorXd::Zero(logs.front().vec.size());
        for (const TangentVector& lg : logs) avg += lg.vec;
        avg /= static_cast<double>(points.size());
    }
    check.rhs = space->norm(TangentVector{base, avg});
    check.holds = check.lhs <= check.rhs + 1e-8;
    check.strict = (check.rhs - check.lhs) > 1e-6;
    return check;
}

ModulationEstimate modulation_estimate(const ManifoldPtr& space, const SymmetricSampler& sampler,
                                       int n, int replications, std::uint64_t seed,
                                       const SolverConfig& config, int jobs) {
    if (!space) throw std::invalid_argument("modulation_estimate needs a space");
    if (sampler.space()->tag() != space->tag()) {
        throw std::domain_error("modulation_estimate: sampler lives on a different space");
    }
    if (!sampler.finite_second_moment()) {
        throw std::invalid_argument(
            "modulation_estimate requires a sampler with finite variance");
    }
    if (n < 1) throw std::invalid_argument("modulation_estimate needs n >= 1");
    if (replications < 2) throw std::invalid_argument("modulation_estimate needs replications >= 2");

    const Point& mu = sampler.center();
    std::vector<double> num(replications);  // d^2(mean_n, mu)
    std::vector<double> den(replications);  // mean of d^2(X_i, mu)
    parallel_for(static_cast<std::size_t>(replications), jobs, [&](std::size_t r) {
        RngStream rng(seed, {static_cast<std::uint64_t>(r)});
        std::vector<Point> pts;
        pts.reserve(n);
        double dsq = 0.0;
        for (int i = 0; i < n; ++i) {
            Point x = sampler.sample(rng);
            double d = space->distance(x, mu);
            dsq += d * d;
            pts.push_back(std::move(x));
        }
        FrechetResult res = frechet_mean(space, pts, config);
        double dm = space->distance(res.mean, mu);
        num[r] = dm * dm;
        den[r] = dsq / static_cast<double>(n);
    });

    return modulation_from_replicates(n, num, den);
}

ModulationEstimate modulation_from_replicates(int n, const std::vector<double>& mean_sq_dist,
                                              const std::vector<double>& sample_mean_sq) {
    if (mean_sq_dist.size() != sample_mean_sq.size() || mean_sq_dist.size() < 2) {
        throw std::invalid_argument("modulation needs matched replicate vectors of size >= 2");
    }
    const int replications = static_cast<int>(mean_sq_dist.size());
    const double nn = static_cast<double>(n);
    const double R = static_cast<double>(replications);
    double num_sum = std::accumulate(mean_sq_dist.begin(), mean_sq_dist.end(), 0.0);
    double den_sum = std::accumulate(sample_mean_sq.begin(), sample_mean_sq.end(), 0.0);
    if (den_sum <= 0.0) {
        throw std::runtime_error("modulation: degenerate sampler (zero spread)");
    }
    double m_hat = nn * num_sum / den_sum;

    // Delete-one jackknife over replications.
    double mean_loo = 0.0;
    std::vector<double> loo(replications);
    for (int r = 0; r < replications; ++r) {
        loo[r] = nn * (num_sum - mean_sq_dist[r]) / (den_sum - sample_mean_sq[r]);
        mean_loo += loo[r];
    }
    mean_loo /= R;
    double ss = 0.0;
    for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
    double se = std::sqrt((R - 1.0) / R * ss);

    return ModulationEstimate{n, m_hat, se, replications};
}

}  // namespace symstat
