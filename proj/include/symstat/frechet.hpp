#pragma once

#include "symstat/manifold.hpp"
#include "symstat/rng.hpp"

#include <cstdint>

namespace symstat {

class SymmetricSampler;

struct SolverConfig {
    // Tolerance on the averaged gradient (1/n) sum Log_m(x_i), so it is
    // independent of the sample size.
    double gradient_tolerance = 1e-9;
    int max_iterations = 200;
    double step_size = 1.0;  // in (0, 1]; halved within an iteration if the
                             // objective would increase

    void validate() const;
};

struct FrechetResult {
    Point mean;
    double gradient_norm = 0.0;  // averaged gradient at the returned point
    int iterations = 0;
    bool converged = false;
};

// Sample mean as the minimizer of the sum of squared distances, computed by
// the fixed-point iteration m <- Exp_m(step * (1/n) sum Log_m(x_i)),
// initialized at points[0]. On the spaces in this library the minimizer is
// unique and the iteration converges from any start; the step is halved
// within an iteration whenever the objective would increase.
FrechetResult frechet_mean(const ManifoldPtr& space, const std::vector<Point>& points,
                           const SolverConfig& config = {});

struct ShrinkageCheck {
    double lhs = 0.0;    // |Log_base(mean)|
    double rhs = 0.0;    // |(1/n) sum Log_base(x_i)|
    bool holds = false;  // lhs <= rhs + 1e-8
    bool strict = false; // rhs - lhs > 1e-6
};

// The sample mean seen from any base point is no farther than the averaged
// log vector: |Log_x(mean)| <= |(1/n) sum Log_x(x_i)|, with equality on flat
// space or when all points share a geodesic through the base.
ShrinkageCheck shrinkage_check(const ManifoldPtr& space, const Point& base,
                               const std::vector<Point>& points,
                               const SolverConfig& config = {});

struct ModulationEstimate {
    int n = 0;
    double m_hat = 0.0;          // n E[d^2(mean_n, mu)] / E[d^2(X, mu)]
    double standard_error = 0.0; // replication-level jackknife of the ratio
    int replications = 0;
};

// Monte Carlo estimate of the variance modulation of the sample mean. Each
// replication draws n points from the sampler, solves for the mean, and
// feeds both the numerator (distance of the mean to the center) and the
// denominator (pooled squared distances of the draws) so the ratio is
// paired. Replications are distributed over `jobs` workers; each derives
// its own stream from (seed, replication), so the result is bitwise
// reproducible for any worker count. Requires a sampler with finite
// variance.
ModulationEstimate modulation_estimate(const ManifoldPtr& space, const SymmetricSampler& sampler,
                                       int n, int replications, std::uint64_t seed,
                                       const SolverConfig& config = {}, int jobs = 0);

// Ratio and jackknife from per-replication pairs: mean_sq_dist[r] is
// d^2(mean_n, mu) and sample_mean_sq[r] the average of d^2(X_i, mu) in
// replication r.
ModulationEstimate modulation_from_replicates(int n, const std::vector<double>& mean_sq_dist,
                                              const std::vector<double>& sample_mean_sq);

}  // namespace symstat
