#pragma once

#include "symstat/experiments.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace symstat::cli {

// Parsed and validated experiment configuration plus its resolved JSON form
// (defaults filled in, keys sorted) as written to config.resolved.
struct LoadedConfig {
    ExperimentConfig config;
    std::string resolved_json;
};

LoadedConfig load_config_string(const std::string& text);
LoadedConfig load_config_file(const std::string& path);

// FNV-1a over the resolved config bytes, formatted as "fnv1a:<16 hex>".
std::string config_hash(const std::string& resolved_json);

// Runs the configured scenario and writes trials.csv, summary.json,
// plot.csv, config.resolved and manifest.json into out_dir. Returns the
// process exit code: 0 on completion (pass flags do not affect it), 2 for
// unreadable or invalid configuration, 3 for output failures, 1 for
// execution errors.
int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override, std::optional<int> jobs_override);

// Runs a named invariant suite, printing one line per invariant. Exit 0
// when everything passes, 1 otherwise, 2 for an unknown suite.
int check_command(const std::string& suite, std::uint64_t seed);

// Prints scenarios, space families, sampler kinds and the config schema.
int list_command(bool as_json);

// Argument parsing for the symstat binary.
int main(int argc, const char* const* argv);

const char* config_schema_json();
const char* summary_schema_json();

// Serialization used by run_command, exposed for tests.
std::string trials_csv(const std::vector<TrialRecord>& records);
std::string plot_csv(const ConvergenceSummary& summary);
std::string summary_json(const ConvergenceSummary& summary, std::uint64_t seed,
                         const std::string& hash);

}  // namespace symstat::cli
