#pragma once

#include "symstat/frechet.hpp"
#include "symstat/manifold.hpp"
#include "symstat/sampling.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>

namespace symstat {

// The five scenario families. Each verifies one convergence or
// non-convergence claim by replication at a grid of sample sizes.
enum class Scenario {
    increasing_variance,  // independent draws with variance growing as i^alpha
    heavy_tail,           // iid law with infinite first moment but vanishing scaled tail
    first_moment,         // iid law with finite first, infinite second moment
    modulation,           // variance modulation of the sample mean, per space
    converse_pareto,      // non-convergence when the scaled tail does not vanish
};

std::string scenario_id(Scenario s);
std::optional<Scenario> scenario_from_id(const std::string& id);

struct SpaceSpec {
    enum class Family { euclidean, hyperboloid, spd };

    Family family = Family::euclidean;
    int k = 1;
    std::optional<Eigen::MatrixXd> gram;  // euclidean only

    ManifoldPtr build() const;
    std::string label() const;
};

struct SamplerSpec {
    enum class Law { gaussian, radial };

    Law law = Law::gaussian;
    double sigma = 1.0;                      // gaussian
    RadialLaw::Kind kind = RadialLaw::Kind::chi;  // radial
    double param = 1.0;                      // df, index, or nu

    SymmetricSampler build(const ManifoldPtr& space, const Point& center) const;
    bool finite_first_moment() const;
    bool finite_second_moment() const;
};

struct PassRule {
    double epsilon = 0.5;                  // exceedance level evaluated for pass flags
    std::optional<double> max_exceedance;  // at the largest n (convergence scenarios)
    std::optional<double> min_exceedance;  // at every n (converse scenario)
};

struct ExperimentConfig {
    Scenario scenario = Scenario::modulation;
    std::uint64_t seed = 0;
    std::vector<SpaceSpec> spaces;
    std::optional<SamplerSpec> sampler;
    std::vector<int> sample_sizes;   // strictly increasing
    std::vector<int> replications;   // one per sample size, each >= 30
    double alpha = 0.5;              // increasing_variance only, in (0, 1)
    std::vector<double> epsilons{0.25, 0.5, 1.0};
    PassRule pass;
    SolverConfig solver;

    void validate() const;
};

struct TrialRecord {
    std::string scenario;
    std::string space;
    int n = 0;
    int replication = 0;
    double distance = 0.0;  // d(mean_n, center)
    bool mismatch = false;  // some draw farther than n from the center
    double wall_time_sec = 0.0;
};

struct ExceedanceCell {
    double epsilon = 0.0;
    WilsonInterval probability;
};

struct SummaryRow {
    std::string space;
    int n = 0;
    int replications = 0;
    double median_distance = 0.0;
    double q90_distance = 0.0;
    std::vector<ExceedanceCell> exceedance;
    double mismatch_frequency = 0.0;
    int nonconverged = 0;

    // Scenario analytics; NaN when not applicable.
    double tail_functional = std::numeric_limits<double>::quiet_NaN();
    double sum_tail_bound = std::numeric_limits<double>::quiet_NaN();
    double second_moment_bound = std::numeric_limits<double>::quiet_NaN();
    double m_hat = std::numeric_limits<double>::quiet_NaN();
    double m_se = std::numeric_limits<double>::quiet_NaN();
    double analytic_floor = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceSummary {
    std::string scenario;
    std::vector<SummaryRow> rows;
    std::map<std::string, bool> pass_flags;
    std::vector<std::string> warnings;
};

struct RunResult {
    ConvergenceSummary summary;
    std::vector<TrialRecord> records;
};

// Aggregates records sharing a scenario id into per-(space, n) rows:
// nearest-rank median and 0.9 quantile of the distance, exceedance
// frequencies with Wilson intervals at the given epsilons, and the mismatch
// frequency. Deterministic given the records.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records,
                                  const std::vector<double>& epsilons);

// Nearest-rank quantile: the value at rank ceil(p * N) of the sorted sample.
double nearest_rank_quantile(std::vector<double> values, double p);

// Dispatches on config.scenario. Replications run as independent tasks over
// a worker pool of `jobs` threads; each derives its stream from
// (seed, scenario, space index, n index, replication), so summaries are
// bitwise identical for any worker count.
RunResult run_experiment(const ExperimentConfig& config, int jobs = 0);

// Analytic hypothesis bounds for the increasing-variance scenario on
// spd(k) with tangent covariance i^alpha I:
//   sum of tail probabilities  <= 2^{k(k+1)/4} n exp(-n^{2(1-alpha)}/4)
//   n^{-2} sum of second moments <= (k(k+1)/2) n^{alpha-1} (1+1/n)^{alpha+1} / (alpha+1)
double increasing_variance_tail_bound(int k, double alpha, int n);
double increasing_variance_moment_bound(int k, double alpha, int n);

// (1 - e^{-delta}) / 2: the non-convergence floor for the converse scenario
// at scaled tail mass delta.
double converse_floor(double delta);

}  // namespace symstat
