#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hrlab/config.hpp"
#include "hrlab/dqn.hpp"

namespace hrlab {

struct RunResult {
    std::string run_id;
    TrainConfig config;
    std::optional<TrainRunRecord> record;  // empty on failure
    std::string error;
};

struct SuiteResult {
    std::vector<RunResult> runs;
    std::string metrics_path;
    std::string manifest_path;
    bool all_ok = true;
};

/// One metrics row per diagnostic checkpoint.
struct MetricsRow {
    std::string run_id;
    std::string variant;
    std::string activation;
    std::uint64_t seed = 0;
    std::size_t step = 0;
    double eval_return = 0.0;
    double return_normalized = 0.0;  // eval_return / optimal_return
    double dormant_fraction = 0.0;
    std::size_t effective_rank = 0;
    double live_contrib = 0.0;
    double dormant_contrib = 0.0;
    double loss = 0.0;
};

std::string run_id_for(const TrainConfig& cfg);

/// Deterministic CSV rendering (header + rows, '\n' endings, 17 significant
/// digits) for a set of completed runs, in the given order.
std::string metrics_csv(const std::vector<const TrainRunRecord*>& records);
std::vector<MetricsRow> parse_metrics_csv(const std::string& text);

/// Writes content to path via temp file + rename.
void atomic_write(const std::string& path, const std::string& content);

/// Executes the variant x activation x seed grid sequentially, then writes
/// metrics.csv and manifest.json into the output directory (HR_LAB_OUT
/// overrides config). Failed runs are recorded in the manifest; completed
/// runs' rows are still written.
SuiteResult run_experiment_suite(const SuiteConfig& config, std::ostream* log = nullptr);

/// Seed-mean of a final-checkpoint metric over all completed runs matching
/// (variant, activation). Throws if no run matches.
double seed_mean_final_dormancy(const std::vector<RunResult>& runs, Variant v,
                                Activation a);
double seed_mean_final_rank(const std::vector<RunResult>& runs, Variant v,
                            Activation a);
double seed_mean_final_return(const std::vector<RunResult>& runs, Variant v,
                              Activation a);

}  // namespace hrlab
