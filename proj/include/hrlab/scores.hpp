#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hrlab {

/// (score - min) / (max - min), against the baseline's recorded extremes.
/// May leave [0, 1]. Throws on max <= min.
double baseline_normalized(double score, double min_score, double max_score);

/// (score - random) / (human - random). Throws on human == random.
double human_normalized(double score, double random_score, double human_score);

/// (score - random) / (target - random); 1 means consistently solving the
/// task. Throws on target == random.
double success_normalized(double score, double random_ref, double target_ref);

/// Median with the even-count convention of averaging the middle pair.
double median(std::vector<double> values);

/// Interquartile mean: sort, drop floor(n/4) from each end, average the rest.
double iqm(std::vector<double> values);

/// Seed scores per task -> seed-average per task -> median across tasks.
double median_aggregate(const std::map<std::string, std::vector<double>>& per_task_scores);

/// One row of a score table; optional references are validated by the
/// normalization that needs them.
struct ScoreRow {
    std::string task;
    std::uint64_t seed = 0;
    double score = 0.0;
    std::optional<double> random_ref;
    std::optional<double> human_ref;
    std::optional<double> target_ref;
    std::optional<double> baseline_min;
    std::optional<double> baseline_max;
};

enum class NormalizationMethod { Baseline, Human, Success };
enum class AggregateMethod { Median, Iqm };

NormalizationMethod normalization_from_name(const std::string& s);
AggregateMethod aggregate_from_name(const std::string& s);

/// Normalizes every row, averages across seeds per task, then aggregates.
double aggregate_score_table(const std::vector<ScoreRow>& rows,
                             NormalizationMethod method, AggregateMethod aggregate);

/// Parses the CSV score table (header: task,seed,score,random,human,target,
/// baseline_min,baseline_max; empty cells mean absent).
std::vector<ScoreRow> load_score_table(const std::string& path);

}  // namespace hrlab
