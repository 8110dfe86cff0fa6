#include "symstat/cli.hpp"

#include "symstat/invariants.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace symstat::cli {

namespace {

using nlohmann::json;

// Values print with 17 significant digits so re-parsing them reproduces the
// exact doubles.
std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

const json& require_key(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string("config: missing required key '") + key + "'");
    return *it;
}

SpaceSpec parse_space(const json& j) {
    SpaceSpec spec;
    std::string family = require_key(j, "family").get<std::string>();
    if (family == "euclidean") {
        spec.family = SpaceSpec::Family::euclidean;
    } else if (family == "hyperboloid") {
        spec.family = SpaceSpec::Family::hyperboloid;
    } else if (family == "spd") {
        spec.family = SpaceSpec::Family::spd;
    } else {
        throw ConfigError("config: unknown space family '" + family + "'");
    }
    spec.k = require_key(j, "k").get<int>();
    if (spec.k < 1) throw ConfigError("config: space k must be >= 1");
    if (j.contains("gram")) {
        if (spec.family != SpaceSpec::Family::euclidean) {
            throw ConfigError("config: gram applies to euclidean spaces only");
        }
        auto rows = j.at("gram");
        Eigen::MatrixXd g(spec.k, spec.k);
        if (static_cast<int>(rows.size()) != spec.k) {
            throw ConfigError("config: gram must be k rows of k numbers");
        }
        for (int i = 0; i < spec.k; ++i) {
            if (static_cast<int>(rows[i].size()) != spec.k) {
                throw ConfigError("config: gram must be k rows of k numbers");
            }
            for (int c = 0; c < spec.k; ++c) g(i, c) = rows[i][c].get<double>();
        }
        spec.gram = g;
    }
    return spec;
}

SamplerSpec parse_sampler(const json& j) {
    SamplerSpec spec;
    std::string law = require_key(j, "law").get<std::string>();
    if (law == "gaussian") {
        spec.law = SamplerSpec::Law::gaussian;
        spec.sigma = j.value("sigma", 1.0);
        if (spec.sigma < 0.0) throw ConfigError("config: sampler sigma must be >= 0");
    } else if (law == "radial") {
        spec.law = SamplerSpec::Law::radial;
        std::string kind = require_key(j, "kind").get<std::string>();
        if (kind == "chi") {
            spec.kind = RadialLaw::Kind::chi;
            spec.param = require_key(j, "df").get<double>();
        } else if (kind == "loglog") {
            spec.kind = RadialLaw::Kind::loglog_tail;
            spec.param = 0.0;
        } else if (kind == "pareto") {
            spec.kind = RadialLaw::Kind::pareto;
            spec.param = require_key(j, "index").get<double>();
        } else if (kind == "student") {
            spec.kind = RadialLaw::Kind::student;
            spec.param = require_key(j, "nu").get<double>();
        } else {
            throw ConfigError("config: unknown radial kind '" + kind + "'");
        }
    } else {
        throw ConfigError("config: unknown sampler law '" + law + "'");
    }
    return spec;
}

json space_to_json(const SpaceSpec& spec) {
    json j;
    switch (spec.family) {
        case SpaceSpec::Family::euclidean: j["family"] = "euclidean"; break;
        case SpaceSpec::Family::hyperboloid: j["family"] = "hyperboloid"; break;
        case SpaceSpec::Family::spd: j["family"] = "spd"; break;
    }
    j["k"] = spec.k;
    if (spec.gram) {
        json rows = json::array();
        for (int i = 0; i < spec.gram->rows(); ++i) {
            json row = json::array();
            for (int c = 0; c < spec.gram->cols(); ++c) row.push_back((*spec.gram)(i, c));
            rows.push_back(row);
        }
        j["gram"] = rows;
    }
    return j;
}

json sampler_to_json(const SamplerSpec& spec) {
    json j;
    if (spec.law == SamplerSpec::Law::gaussian) {
        j["law"] = "gaussian";
        j["sigma"] = spec.sigma;
        return j;
    }
    j["law"] = "radial";
    switch (spec.kind) {
        case RadialLaw::Kind::chi:
            j["kind"] = "chi";
            j["df"] = spec.param;
            break;
        case RadialLaw::Kind::loglog_tail:
            j["kind"] = "loglog";
            break;
        case RadialLaw::Kind::pareto:
            j["kind"] = "pareto";
            j["index"] = spec.param;
            break;
        case RadialLaw::Kind::student:
            j["kind"] = "student";
            j["nu"] = spec.param;
            break;
    }
    return j;
}

}  // namespace

LoadedConfig load_config_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    std::string sid = require_key(j, "scenario").get<std::string>();
    auto scenario = scenario_from_id(sid);
    if (!scenario) throw ConfigError("config: unknown scenario '" + sid + "'");
    cfg.scenario = *scenario;
    cfg.seed = require_key(j, "seed").get<std::uint64_t>();

    const json& spaces = require_key(j, "spaces");
    if (!spaces.is_array() || spaces.empty()) {
        throw ConfigError("config: spaces must be a nonempty array");
    }
    for (const json& s : spaces) cfg.spaces.push_back(parse_space(s));

    if (j.contains("sampler")) cfg.sampler = parse_sampler(j.at("sampler"));

    cfg.sample_sizes = require_key(j, "sample_sizes").get<std::vector<int>>();
    cfg.replications = require_key(j, "replications").get<std::vector<int>>();
    if (j.contains("epsilons")) cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("pass")) {
        const json& p = j.at("pass");
        cfg.pass.epsilon = p.value("epsilon", 0.5);
        if (p.contains("max_exceedance")) cfg.pass.max_exceedance = p.at("max_exceedance").get<double>();
        if (p.contains("min_exceedance")) cfg.pass.min_exceedance = p.at("min_exceedance").get<double>();
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        cfg.solver.gradient_tolerance = s.value("gradient_tolerance", cfg.solver.gradient_tolerance);
        cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
        cfg.solver.step_size = s.value("step_size", cfg.solver.step_size);
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    // Resolved form: defaults made explicit, keys in sorted order.
    json resolved;
    resolved["scenario"] = scenario_id(cfg.scenario);
    resolved["seed"] = cfg.seed;
    resolved["spaces"] = json::array();
    for (const SpaceSpec& s : cfg.spaces) resolved["spaces"].push_back(space_to_json(s));
    if (cfg.sampler) resolved["sampler"] = sampler_to_json(*cfg.sampler);
    resolved["sample_sizes"] = cfg.sample_sizes;
    resolved["replications"] = cfg.replications;
    resolved["epsilons"] = cfg.epsilons;
    if (cfg.scenario == Scenario::increasing_variance) resolved["alpha"] = cfg.alpha;
    json pass;
    pass["epsilon"] = cfg.pass.epsilon;
    if (cfg.pass.max_exceedance) pass["max_exceedance"] = *cfg.pass.max_exceedance;
    if (cfg.pass.min_exceedance) pass["min_exceedance"] = *cfg.pass.min_exceedance;
    resolved["pass"] = pass;
    json solver;
    solver["gradient_tolerance"] = cfg.solver.gradient_tolerance;
    solver["max_iterations"] = cfg.solver.max_iterations;
    solver["step_size"] = cfg.solver.step_size;
    resolved["solver"] = solver;

    return LoadedConfig{std::move(cfg), resolved.dump(2) + "\n"};
}

LoadedConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_string(buf.str());
}

std::string config_hash(const std::string& resolved_json) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : resolved_json) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
    std::string out = "scenario,space,n,replication,distance,mismatch\n";
    for (const TrialRecord& r : records) {
        out += r.scenario;
        out += ',';
        out += r.space;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.replication);
        out += ',';
        out += fmt17(r.distance);
        out += ',';
        out += r.mismatch ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string plot_csv(const ConvergenceSummary& summary) {
    std::string out = "n,statistic,value,lower,upper\n";
    auto emit = [&out](int n, const std::string& stat, double v, double lo, double hi) {
        if (std::isnan(v)) return;
        out += std::to_string(n);
        out += ',';
        out += stat;
        out += ',';
        out += fmt17(v);
        out += ',';
        out += fmt17(lo);
        out += ',';
        out += fmt17(hi);
        out += '\n';
    };
    for (const SummaryRow& row : summary.rows) {
        const std::string sp = ":" + row.space;
        emit(row.n, "median_distance" + sp, row.median_distance, row.median_distance,
             row.median_distance);
        emit(row.n, "q90_distance" + sp, row.q90_distance, row.q90_distance, row.q90_distance);
        for (const ExceedanceCell& cell : row.exceedance) {
            emit(row.n, "exceedance@" + fmt17(cell.epsilon) + sp, cell.probability.estimate,
                 cell.probability.lower, cell.probability.upper);
        }
        emit(row.n, "mismatch_frequency" + sp, row.mismatch_frequency, row.mismatch_frequency,
             row.mismatch_frequency);
        emit(row.n, "tail_functional" + sp, row.tail_functional, row.tail_functional,
             row.tail_functional);
        emit(row.n, "sum_tail_bound" + sp, row.sum_tail_bound, row.sum_tail_bound,
             row.sum_tail_bound);
        emit(row.n, "second_moment_bound" + sp, row.second_moment_bound, row.second_moment_bound,
             row.second_moment_bound);
        if (!std::isnan(row.m_hat)) {
            emit(row.n, "m_hat" + sp, row.m_hat, row.m_hat - row.m_se, row.m_hat + row.m_se);
        }
        emit(row.n, "analytic_floor" + sp, row.analytic_floor, row.analytic_floor,
             row.analytic_floor);
    }
    return out;
}

std::string summary_json(const ConvergenceSummary& summary, std::uint64_t seed,
                         const std::string& hash) {
    json j;
    j["artifact_version"] = SYMSTAT_VERSION;
    j["scenario"] = summary.scenario;
    j["seed"] = seed;
    j["config_hash"] = hash;
    json rows = json::array();
    for (const SummaryRow& row : summary.rows) {
        json r;
        r["space"] = row.space;
        r["n"] = row.n;
        r["replications"] = row.replications;
        r["median_distance"] = row.median_distance;
        r["q90_distance"] = row.q90_distance;
        json ex = json::array();
        for (const ExceedanceCell& cell : row.exceedance) {
            ex.push_back(json{{"epsilon", cell.epsilon},
                              {"estimate", cell.probability.estimate},
                              {"lower", cell.probability.lower},
                              {"upper", cell.probability.upper}});
        }
        r["exceedance"] = ex;
        r["mismatch_frequency"] = row.mismatch_frequency;
        r["nonconverged"] = row.nonconverged;
        if (!std::isnan(row.tail_functional)) r["tail_functional"] = row.tail_functional;
        if (!std::isnan(row.sum_tail_bound)) r["sum_tail_bound"] = row.sum_tail_bound;
        if (!std::isnan(row.second_moment_bound)) {
            r["second_moment_bound"] = row.second_moment_bound;
        }
        if (!std::isnan(row.m_hat)) {
            r["m_hat"] = row.m_hat;
            r["m_se"] = row.m_se;
        }
        if (!std::isnan(row.analytic_floor)) r["analytic_floor"] = row.analytic_floor;
        rows.push_back(r);
    }
    j["rows"] = rows;
    j["pass_flags"] = summary.pass_flags;
    j["warnings"] = summary.warnings;
    return j.dump(2) + "\n";
}

namespace {

bool write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    out.flush();
    return out.good();
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("SYMSTAT_SEED");
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::strtoull(v, nullptr, 10);
}

std::optional<int> env_jobs() {
    const char* v = std::getenv("SYMSTAT_JOBS");
    if (v == nullptr || *v == '\0') return std::nullopt;
    return static_cast<int>(std::strtol(v, nullptr, 10));
}

}  // namespace

int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override, std::optional<int> jobs_override) {
    LoadedConfig loaded;
    try {
        loaded = load_config_file(config_path);
        if (!seed_override) seed_override = env_seed();
        if (seed_override) {
            // Re-resolve with the effective seed so the emitted config copy
            // remains the authoritative record of the run.
            json j = json::parse(loaded.resolved_json);
            j["seed"] = *seed_override;
            loaded = load_config_string(j.dump());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    int jobs = jobs_override ? *jobs_override : env_jobs().value_or(0);

    RunResult result;
    double t0 = std::chrono::duration<double>(
                    std::chrono::steady_clock::now().time_since_epoch()).count();
    try {
        result = run_experiment(loaded.config, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now().time_since_epoch()).count() - t0;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create output directory '" << out_dir << "'\n";
        return 3;
    }
    const std::filesystem::path dir(out_dir);
    const std::string hash = config_hash(loaded.resolved_json);

    json manifest;
    manifest["artifact_version"] = SYMSTAT_VERSION;
    manifest["config_hash"] = hash;
    manifest["master_seed"] = loaded.config.seed;
    manifest["scenario"] = scenario_id(loaded.config.scenario);
    manifest["outputs"] = json{{"trials", "trials.csv"},
                               {"summary", "summary.json"},
                               {"plot", "plot.csv"},
                               {"config", "config.resolved"}};
    manifest["created_utc"] = iso_timestamp();
    manifest["wall_time_sec"] = wall;

    bool ok = write_file(dir / "trials.csv", trials_csv(result.records)) &&
              write_file(dir / "summary.json",
                         summary_json(result.summary, loaded.config.seed, hash)) &&
              write_file(dir / "plot.csv", plot_csv(result.summary)) &&
              write_file(dir / "config.resolved", loaded.resolved_json) &&
              write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    if (!ok) {
        std::cerr << "error: failed to write outputs under '" << out_dir << "'\n";
        return 3;
    }
    for (const std::string& w : result.summary.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    return 0;
}

int check_command(const std::string& suite, std::uint64_t seed) {
    if (!is_known_suite(suite)) {
        std::cerr << "error: unknown suite '" << suite
                  << "' (expected geometry, symmetry, frechet, sampling or all)\n";
        return 2;
    }
    std::vector<InvariantResult> results = run_invariant_suite(suite, seed);
    std::size_t failed = 0;
    for (const InvariantResult& r : results) {
        std::printf("[%s] %-12s %-24s %s\n", r.pass ? "PASS" : "FAIL", r.suite.c_str(),
                    r.name.c_str(), r.detail.c_str());
        if (!r.pass) ++failed;
    }
    std::printf("%zu/%zu invariants passed (seed %llu)\n", results.size() - failed,
                results.size(), static_cast<unsigned long long>(seed));
    return failed == 0 ? 0 : 1;
}

int list_command(bool as_json) {
    static const std::pair<const char*, const char*> kScenarios[] = {
        {"increasing_variance",
         "independent spd draws with tangent covariance i^alpha I; reports the analytic "
         "hypothesis bounds alongside empirical exceedance"},
        {"heavy_tail",
         "iid radial law whose scaled tail n P(d > n) vanishes while the first moment is "
         "infinite; exceedance must decrease along the n grid"},
        {"first_moment",
         "iid radial law with finite first and infinite second moment; exceedance must "
         "decrease along the n grid"},
        {"modulation",
         "ratio n E[d^2(mean_n, mu)] / E[d^2(X, mu)] per space and n; flat rows bracket 1, "
         "negatively curved rows sit below 1"},
        {"converse_pareto",
         "symmetric pareto(1) draws in euclidean space; the mean stays away from the center "
         "with probability at least (1 - 1/e)/2"},
    };
    if (as_json) {
        json j;
        json scenarios = json::array();
        for (const auto& [name, desc] : kScenarios) {
            scenarios.push_back(json{{"name", name}, {"description", desc}});
        }
        j["scenarios"] = scenarios;
        j["space_families"] = {"euclidean", "hyperboloid", "spd"};
        j["sampler_kinds"] = {"gaussian", "radial:chi", "radial:loglog", "radial:pareto",
                              "radial:student"};
        j["config_schema"] = json::parse(config_schema_json());
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "scenarios:\n";
    for (const auto& [name, desc] : kScenarios) {
        std::cout << "  " << name << "\n      " << desc << "\n";
    }
    std::cout << "space families: euclidean(k[,gram]), hyperboloid(k), spd(k)\n";
    std::cout << "sampler kinds: gaussian(sigma), radial chi(df), radial loglog, "
                 "radial pareto(index), radial student(nu)\n";
    std::cout << "defaults: epsilons [0.25, 0.5, 1.0]; solver {gradient_tolerance 1e-9, "
                 "max_iterations 200, step_size 1}; pass.epsilon 0.5\n";
    std::cout << "scenario and seed have no defaults and must appear in the config.\n";
    return 0;
}

const char* config_schema_json() {
    return R"json({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "symstat experiment config",
  "type": "object",
  "required": ["scenario", "seed", "spaces", "sample_sizes", "replications"],
  "additionalProperties": false,
  "properties": {
    "scenario": {
      "type": "string",
      "enum": ["increasing_variance", "heavy_tail", "first_moment", "modulation", "converse_pareto"]
    },
    "seed": {"type": "integer", "minimum": 0},
    "spaces": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "object",
        "required": ["family", "k"],
        "additionalProperties": false,
        "properties": {
          "family": {"type": "string", "enum": ["euclidean", "hyperboloid", "spd"]},
          "k": {"type": "integer", "minimum": 1},
          "gram": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
        }
      }
    },
    "sampler": {
      "type": "object",
      "required": ["law"],
      "additionalProperties": false,
      "properties": {
        "law": {"type": "string", "enum": ["gaussian", "radial"]},
        "sigma": {"type": "number", "minimum": 0, "default": 1.0},
        "kind": {"type": "string", "enum": ["chi", "loglog", "pareto", "student"]},
        "df": {"type": "number", "minimum": 1},
        "index": {"type": "number", "exclusiveMinimum": 0},
        "nu": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "sample_sizes": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
    "replications": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 30}},
    "epsilons": {
      "type": "array",
      "minItems": 1,
      "items": {"type": "number", "exclusiveMinimum": 0},
      "default": [0.25, 0.5, 1.0]
    },
    "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 0.5},
    "pass": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "epsilon": {"type": "number", "default": 0.5},
        "max_exceedance": {"type": "number"},
        "min_exceedance": {"type": "number"}
      }
    },
    "solver": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "gradient_tolerance": {"type": "number", "exclusiveMinimum": 0, "default": 1e-9},
        "max_iterations": {"type": "integer", "minimum": 1, "default": 200},
        "step_size": {"type": "number", "exclusiveMinimum": 0, "maximum": 1, "default": 1.0}
      }
    }
  }
}
)json";
}

const char* summary_schema_json() {
    return R"json({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "symstat run summary",
  "type": "object",
  "required": ["artifact_version", "scenario", "seed", "config_hash", "rows", "pass_flags", "warnings"],
  "additionalProperties": false,
  "properties": {
    "artifact_version": {"type": "string"},
    "scenario": {"type": "string"},
    "seed": {"type": "integer"},
    "config_hash": {"type": "string"},
    "rows": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["space", "n", "replications", "median_distance", "q90_distance",
                     "exceedance", "mismatch_frequency", "nonconverged"],
        "additionalProperties": false,
        "properties": {
          "space": {"type": "string"},
          "n": {"type": "integer"},
          "replications": {"type": "integer"},
          "median_distance": {"type": "number"},
          "q90_distance": {"type": "number"},
          "exceedance": {
            "type": "array",
            "items": {
              "type": "object",
              "required": ["epsilon", "estimate", "lower", "upper"],
              "additionalProperties": false,
              "properties": {
                "epsilon": {"type": "number"},
                "estimate": {"type": "number"},
                "lower": {"type": "number"},
                "upper": {"type": "number"}
              }
            }
          },
          "mismatch_frequency": {"type": "number"},
          "nonconverged": {"type": "integer"},
          "tail_functional": {"type": "number"},
          "sum_tail_bound": {"type": "number"},
          "second_moment_bound": {"type": "number"},
          "m_hat": {"type": "number"},
          "m_se": {"type": "number"},
          "analytic_floor": {"type": "number"}
        }
      }
    },
    "pass_flags": {"type": "object", "additionalProperties": {"type": "boolean"}},
    "warnings": {"type": "array", "items": {"type": "string"}}
  }
}
)json";
}

int main(int argc, const char* const* argv) {
    CLI::App app{"Monte Carlo verification of mean convergence on nonpositively curved spaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
    bool jobs_set = false;

    CLI::App* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("--config", config_path, "path to the JSON config")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--seed", seed, "master seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--jobs", jobs, "worker count (default: hardware)")
        ->each([&](const std::string&) { jobs_set = true; });

    std::string suite;
    std::uint64_t check_seed = 1;
    CLI::App* check = app.add_subcommand("check", "run an invariant suite");
    check->add_option("suite", suite, "geometry|symmetry|frechet|sampling|all")->required();
    check->add_option("--seed", check_seed, "suite seed (default 1)");

    bool as_json = false;
    CLI::App* list = app.add_subcommand("list", "list scenarios and schemas");
    list->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) {
        return run_command(config_path, out_dir,
                           seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
                           jobs_set ? std::optional<int>(jobs) : std::nullopt);
    }
    if (check->parsed()) {
        return check_command(suite, check_seed);
    }
    return list_command(as_json);
}

}  // namespace symstat::cli
