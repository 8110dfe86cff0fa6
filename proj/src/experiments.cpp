#include "symstat/experiments.hpp"

#include "symstat/euclidean.hpp"
#include "symstat/hyperboloid.hpp"
#include "symstat/parallel.hpp"
#include "symstat/spd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace symstat {

namespace {

constexpr std::uint64_t kScenarioWord = 0x5343454eULL;  // stream path marker

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct CellOutput {
    std::vector<TrialRecord> records;
    int nonconverged = 0;
    std::vector<double> numerators;    // modulation only: d^2(mean, mu)
    std::vector<double> denominators;  // modulation only: mean d^2(X, mu)
};

}  // namespace

std::string scenario_id(Scenario s) {
    switch (s) {
        case Scenario::increasing_variance: return "increasing_variance";
        case Scenario::heavy_tail: return "heavy_tail";
        case Scenario::first_moment: return "first_moment";
        case Scenario::modulation: return "modulation";
        case Scenario::converse_pareto: return "converse_pareto";
    }
    throw std::logic_error("unknown scenario");
}

std::optional<Scenario> scenario_from_id(const std::string& id) {
    for (Scenario s : {Scenario::increasing_variance, Scenario::heavy_tail,
                       Scenario::first_moment, Scenario::modulation,
                       Scenario::converse_pareto}) {
        if (scenario_id(s) == id) return s;
    }
    return std::nullopt;
}

ManifoldPtr SpaceSpec::build() const {
    switch (family) {
        case Family::euclidean:
            return gram ? ManifoldPtr(EuclideanSpace::make(k, *gram))
                        : ManifoldPtr(EuclideanSpace::make(k));
        case Family::hyperboloid:
            return HyperboloidSpace::make(k);
        case Family::spd:
            return SpdSpace::make(k);
    }
    throw std::logic_error("unknown space family");
}

std::string SpaceSpec::label() const {
    return build()->tag();
}

SymmetricSampler SamplerSpec::build(const ManifoldPtr& space, const Point& center) const {
    if (law == Law::gaussian) {
        return SymmetricSampler::isotropic_gaussian(space, center, sigma);
    }
    switch (kind) {
        case RadialLaw::Kind::chi:
            return SymmetricSampler::radial(space, center, RadialLaw::chi(static_cast<int>(param)));
        case RadialLaw::Kind::loglog_tail:
            return SymmetricSampler::radial(space, center, RadialLaw::loglog_tail());
        case RadialLaw::Kind::pareto:
            return SymmetricSampler::radial(space, center, RadialLaw::pareto(param));
        case RadialLaw::Kind::student:
            return SymmetricSampler::radial(space, center, RadialLaw::student(param));
    }
    throw std::logic_error("unknown sampler law");
}

bool SamplerSpec::finite_first_moment() const {
    if (law == Law::gaussian) return true;
    switch (kind) {
        case RadialLaw::Kind::chi: return true;
        case RadialLaw::Kind::loglog_tail: return false;
        case RadialLaw::Kind::pareto: return param > 1.0;
        case RadialLaw::Kind::student: return param > 1.0;
    }
    return true;
}

bool SamplerSpec::finite_second_moment() const {
    if (law == Law::gaussian) return true;
    switch (kind) {
        case RadialLaw::Kind::chi: return true;
        case RadialLaw::Kind::loglog_tail: return false;
        case RadialLaw::Kind::pareto: return param > 2.0;
        case RadialLaw::Kind::student: return param > 2.0;
    }
    return true;
}

void ExperimentConfig::validate() const {
    if (spaces.empty()) throw std::invalid_argument("config: at least one space is required");
    if (sample_sizes.empty()) throw std::invalid_argument("config: sample_sizes is empty");
    if (replications.size() != sample_sizes.size()) {
        throw std::invalid_argument("config: replications must match sample_sizes");
    }
    for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
        if (sample_sizes[i] < 1) throw std::invalid_argument("config: sample sizes must be >= 1");
        if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1]) {
            throw std::invalid_argument("config: sample_sizes must be strictly increasing");
        }
        if (replications[i] < 30) {
            throw std::invalid_argument("config: replications must be >= 30");
        }
    }
    if (epsilons.empty()) throw std::invalid_argument("config: epsilons is empty");
    solver.validate();
    switch (scenario) {
        case Scenario::increasing_variance:
            if (!(alpha > 0.0 && alpha < 1.0)) {
                throw std::invalid_argument("config: alpha must lie in (0, 1)");
            }
            if (spaces.front().family != SpaceSpec::Family::spd) {
                throw std::invalid_argument(
                    "config: the increasing_variance scenario runs on an spd space");
            }
            break;
        case Scenario::heavy_tail:
        case Scenario::first_moment:
            if (!sampler) throw std::invalid_argument("config: sampler is required");
            break;
        case Scenario::modulation:
            if (!sampler) throw std::invalid_argument("config: sampler is required");
            break;
        case Scenario::converse_pareto:
            for (const SpaceSpec& sp : spaces) {
                if (sp.family != SpaceSpec::Family::euclidean) {
                    throw std::invalid_argument(
                        "config: the converse scenario is defined on euclidean spaces only");
                }
            }
            if (!sampler) throw std::invalid_argument("config: sampler is required");
            break;
    }
}

double nearest_rank_quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::domain_error("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(values.size())));
    rank = std::min(std::max<std::size_t>(rank, 1), values.size());
    return values[rank - 1];
}

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records,
                                  const std::vector<double>& epsilons) {
    if (records.empty()) throw std::domain_error("aggregate needs at least one record");
    const std::string& sid = records.front().scenario;
    for (const TrialRecord& r : records) {
        if (r.scenario != sid) {
            throw std::invalid_argument("aggregate: records mix scenario ids");
        }
    }
    // Group by (space, n), preserving first-appearance order.
    std::vector<std::pair<std::string, int>> keys;
    for (const TrialRecord& r : records) {
        std::pair<std::string, int> key{r.space, r.n};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    std::vector<SummaryRow> rows;
    for (const auto& key : keys) {
        std::vector<double> dists;
        std::size_t mismatches = 0;
        for (const TrialRecord& r : records) {
            if (r.space == key.first && r.n == key.second) {
                dists.push_back(r.distance);
                if (r.mismatch) ++mismatches;
            }
        }
        SummaryRow row;
        row.space = key.first;
        row.n = key.second;
        row.replications = static_cast<int>(dists.size());
        row.median_distance = nearest_rank_quantile(dists, 0.5);
        row.q90_distance = nearest_rank_quantile(dists, 0.9);
        for (double eps : epsilons) {
            std::size_t count = 0;
            for (double d : dists) {
                if (d > eps) ++count;
            }
            row.exceedance.push_back(ExceedanceCell{eps, wilson_interval(count, dists.size())});
        }
        row.mismatch_frequency =
            static_cast<double>(mismatches) / static_cast<double>(dists.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

double increasing_variance_tail_bound(int k, double alpha, int n) {
    double m = 0.25 * k * (k + 1);
    return std::exp2(m) * n * std::exp(-0.25 * std::pow(n, 2.0 * (1.0 - alpha)));
}

double increasing_variance_moment_bound(int k, double alpha, int n) {
    double m = 0.5 * k * (k + 1);
    return m * std::pow(n, alpha - 1.0) * std::pow(1.0 + 1.0 / n, alpha + 1.0) / (alpha + 1.0);
}

double converse_floor(double delta) {
    return 0.5 * (1.0 - std::exp(-delta));
}

namespace {

// Runs the replication loop of one (space, n) cell. draw_and_solve returns
// the distance of the estimate to the center plus the mismatch flag.
template <typename Trial>
CellOutput run_cell(const std::string& sid, const std::string& space_label, int n,
                    int replications, int jobs, Trial&& trial) {
    CellOutput out;
    out.records.resize(replications);
    std::vector<int> flags(replications, 0);
    parallel_for(static_cast<std::size_t>(replications), jobs, [&](std::size_t r) {
        double t0 = now_seconds();
        auto res = trial(static_cast<int>(r));
        TrialRecord rec;
        rec.scenario = sid;
        rec.space = space_label;
        rec.n = n;
        rec.replication = static_cast<int>(r);
        rec.distance = res.distance;
        rec.mismatch = res.mismatch;
        rec.wall_time_sec = now_seconds() - t0;
        out.records[r] = std::move(rec);
        flags[r] = res.converged ? 0 : 1;
    });
    out.nonconverged = std::accumulate(flags.begin(), flags.end(), 0);
    return out;
}

struct TrialOutcome {
    double distance = 0.0;
    bool mismatch = false;
    bool converged = true;
};

void fill_pass_flags_convergence(ConvergenceSummary& summary, const ExperimentConfig& config) {
    // Evaluated at pass.epsilon: estimates decrease along the grid and the
    // final value sits below the committed threshold when one is given.
    std::vector<double> exceed;
    for (const SummaryRow& row : summary.rows) {
        for (const ExceedanceCell& cell : row.exceedance) {
            if (cell.epsilon == config.pass.epsilon) exceed.push_back(cell.probability.estimate);
        }
    }
    bool decreasing = exceed.size() >= 2;
    for (std::size_t i = 1; i < exceed.size(); ++i) {
        decreasing = decreasing && exceed[i] < exceed[i - 1];
    }
    summary.pass_flags["exceedance_decreasing"] = decreasing;
    if (config.pass.max_exceedance) {
        summary.pass_flags["final_exceedance_below_threshold"] =
            !exceed.empty() && exceed.back() <= *config.pass.max_exceedance;
    }
}

RunResult run_mean_convergence(const ExperimentConfig& config, int jobs) {
    const std::string sid = scenario_id(config.scenario);
    ManifoldPtr space = config.spaces.front().build();
    Point mu = space->origin();
    SymmetricSampler sampler = config.sampler->build(space, mu);

    RunResult result;
    result.summary.scenario = sid;
    if (config.scenario == Scenario::heavy_tail && sampler.finite_first_moment()) {
        result.summary.warnings.push_back(
            "sampler has a finite first moment; this is the first_moment regime");
    }
    if (config.scenario == Scenario::first_moment && sampler.finite_second_moment()) {
        result.summary.warnings.push_back(
            "sampler has finite variance; the scenario does not exercise an infinite "
            "second moment");
    }

    for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
        const int n = config.sample_sizes[ni];
        const int reps = config.replications[ni];
        CellOutput cell = run_cell(sid, space->tag(), n, reps, jobs, [&](int r) {
            RngStream rng(config.seed, {kScenarioWord, static_cast<std::uint64_t>(config.scenario),
                                        0, static_cast<std::uint64_t>(ni),
                                        static_cast<std::uint64_t>(r)});
            std::vector<Point> pts;
            pts.reserve(n);
            bool mismatch = false;
            for (int i = 0; i < n; ++i) {
                Point x = sampler.sample(rng);
                if (space->distance(x, mu) > static_cast<double>(n)) mismatch = true;
                pts.push_back(std::move(x));
            }
            FrechetResult res = frechet_mean(space, pts, config.solver);
            return TrialOutcome{space->distance(res.mean, mu), mismatch, res.converged};
        });
        SummaryRow row = aggregate(cell.records, config.epsilons).front();
        row.nonconverged = cell.nonconverged;
        if (sampler.tail_function()) {
            row.tail_functional = static_cast<double>(n) * (*sampler.tail_function())(n);
        }
        result.summary.rows.push_back(std::move(row));
        result.records.insert(result.records.end(), cell.records.begin(), cell.records.end());
    }
    fill_pass_flags_convergence(result.summary, config);
    return result;
}

RunResult run_increasing_variance(const ExperimentConfig& config, int jobs) {
    const std::string sid = scenario_id(config.scenario);
    ManifoldPtr space = config.spaces.front().build();
    const int k = config.spaces.front().k;
    Point mu = space->origin();
    const double alpha = config.alpha;

    RunResult result;
    result.summary.scenario = sid;

    for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
        const int n = config.sample_sizes[ni];
        const int reps = config.replications[ni];
        CellOutput cell = run_cell(sid, space->tag(), n, reps, jobs, [&](int r) {
            RngStream rng(config.seed, {kScenarioWord, static_cast<std::uint64_t>(config.scenario),
                                        0, static_cast<std::uint64_t>(ni),
                                        static_cast<std::uint64_t>(r)});
            std::vector<Point> pts;
            pts.reserve(n);
            bool mismatch = false;
            const int dim = space->dimension();
            Eigen::VectorXd z(dim);
            for (int i = 1; i <= n; ++i) {
                for (int j = 0; j < dim; ++j) z(j) = rng.next_normal();
                Eigen::VectorXd c = std::pow(static_cast<double>(i), 0.5 * alpha) * z;
                // In these coordinates the draw's distance to the center is
                // its Euclidean norm.
                if (c.norm() > static_cast<double>(n)) mismatch = true;
                pts.push_back(space->exp(mu, space->tangent_from_coeffs(mu, c)));
            }
            FrechetResult res = frechet_mean(space, pts, config.solver);
            return TrialOutcome{space->distance(res.mean, mu), mismatch, res.converged};
        });
        SummaryRow row = aggregate(cell.records, config.epsilons).front();
        row.nonconverged = cell.nonconverged;
        row.sum_tail_bound = increasing_variance_tail_bound(k, alpha, n);
        row.second_moment_bound = increasing_variance_moment_bound(k, alpha, n);
        result.summary.rows.push_back(std::move(row));
        result.records.insert(result.records.end(), cell.records.begin(), cell.records.end());
    }
    fill_pass_flags_convergence(result.summary, config);
    return result;
}

RunResult run_modulation(const ExperimentConfig& config, int jobs) {
    const std::string sid = scenario_id(config.scenario);
    if (!config.sampler->finite_second_moment()) {
        throw std::invalid_argument("modulation requires a finite-variance sampler");
    }

    RunResult result;
    result.summary.scenario = sid;
    bool curved_below_one = true;
    bool euclidean_brackets_one = true;

    for (std::size_t si = 0; si < config.spaces.size(); ++si) {
        ManifoldPtr space = config.spaces[si].build();
        Point mu = space->origin();
        SymmetricSampler sampler = config.sampler->build(space, mu);
        for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
            const int n = config.sample_sizes[ni];
            const int reps = config.replications[ni];
            CellOutput cell;
            cell.numerators.resize(reps);
            cell.denominators.resize(reps);
            CellOutput run = run_cell(sid, space->tag(), n, reps, jobs, [&](int r) {
                RngStream rng(config.seed,
                              {kScenarioWord, static_cast<std::uint64_t>(config.scenario),
                               static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(ni),
                               static_cast<std::uint64_t>(r)});
                std::vector<Point> pts;
                pts.reserve(n);
                bool mismatch = false;
                double dsq = 0.0;
                for (int i = 0; i < n; ++i) {
                    Point x = sampler.sample(rng);
                    double d = space->distance(x, mu);
                    if (d > static_cast<double>(n)) mismatch = true;
                    dsq += d * d;
                    pts.push_back(std::move(x));
                }
                FrechetResult res = frechet_mean(space, pts, config.solver);
                double dm = space->distance(res.mean, mu);
                cell.numerators[r] = dm * dm;
                cell.denominators[r] = dsq / static_cast<double>(n);
                return TrialOutcome{dm, mismatch, res.converged};
            });
            SummaryRow row = aggregate(run.records, config.epsilons).front();
            row.nonconverged = run.nonconverged;
            ModulationEstimate est = modulation_from_replicates(n, cell.numerators,
                                                                cell.denominators);
            row.m_hat = est.m_hat;
            row.m_se = est.standard_error;
            bool euclidean = config.spaces[si].family == SpaceSpec::Family::euclidean;
            if (euclidean) {
                euclidean_brackets_one = euclidean_brackets_one &&
                                         std::abs(est.m_hat - 1.0) <= 3.0 * est.standard_error;
            } else if (n == config.sample_sizes.back()) {
                curved_below_one = curved_below_one &&
                                   est.m_hat + 3.0 * est.standard_error < 1.0;
            }
            result.summary.rows.push_back(std::move(row));
            result.records.insert(result.records.end(), run.records.begin(), run.records.end());
        }
    }
    result.summary.pass_flags["euclidean_brackets_one"] = euclidean_brackets_one;
    result.summary.pass_flags["curved_below_one"] = curved_below_one;
    return result;
}

RunResult run_converse(const ExperimentConfig& config, int jobs) {
    const std::string sid = scenario_id(config.scenario);

    RunResult result;
    result.summary.scenario = sid;
    // Scaled tail mass of the committed pareto(1) law: n P(|X| > n) = 1 for
    // every n >= 1.
    const double floor = converse_floor(1.0);
    bool floor_holds = true;

    for (std::size_t si = 0; si < config.spaces.size(); ++si) {
        ManifoldPtr space = config.spaces[si].build();
        auto euclid = std::dynamic_pointer_cast<const EuclideanSpace>(space);
        if (!euclid) throw std::invalid_argument("converse scenario needs euclidean spaces");
        Point mu = space->origin();
        SymmetricSampler sampler = config.sampler->build(space, mu);
        for (std::size_t ni = 0; ni < config.sample_sizes.size(); ++ni) {
            const int n = config.sample_sizes[ni];
            const int reps = config.replications[ni];
            CellOutput cell = run_cell(sid, space->tag(), n, reps, jobs, [&](int r) {
                RngStream rng(config.seed,
                              {kScenarioWord, static_cast<std::uint64_t>(config.scenario),
                               static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(ni),
                               static_cast<std::uint64_t>(r)});
                // In a Euclidean space the sample mean minimizes the sum of
                // squared distances for any inner product, so the estimate
                // is the coordinate average.
                Eigen::VectorXd sum = Eigen::VectorXd::Zero(space->dimension());
                bool mismatch = false;
                for (int i = 0; i < n; ++i) {
                    Point x = sampler.sample(rng);
                    if (space->distance(x, mu) > static_cast<double>(n)) mismatch = true;
                    sum += x.coords;
                }
                Point mean{space, sum / static_cast<double>(n)};
                return TrialOutcome{space->distance(mean, mu), mismatch, true};
            });
            SummaryRow row = aggregate(cell.records, config.epsilons).front();
            row.analytic_floor = floor;
            if (sampler.tail_function()) {
                row.tail_functional = static_cast<double>(n) * (*sampler.tail_function())(n);
            }
            for (const ExceedanceCell& c : row.exceedance) {
                if (c.epsilon == config.pass.epsilon && config.pass.min_exceedance) {
                    floor_holds = floor_holds &&
                                  c.probability.estimate >= *config.pass.min_exceedance;
                }
            }
            result.summary.rows.push_back(std::move(row));
            result.records.insert(result.records.end(), cell.records.begin(), cell.records.end());
        }
    }
    if (config.pass.min_exceedance) {
        result.summary.pass_flags["exceedance_above_floor"] = floor_holds;
    }
    return result;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, int jobs) {
    config.validate();
    switch (config.scenario) {
        case Scenario::increasing_variance: return run_increasing_variance(config, jobs);
        case Scenario::heavy_tail:
        case Scenario::first_moment: return run_mean_convergence(config, jobs);
        case Scenario::modulation: return run_modulation(config, jobs);
        case Scenario::converse_pareto: return run_converse(config, jobs);
    }
    throw std::logic_error("unknown scenario");
}

}  // namespace symstat
