#include "hrlab/scores.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hrlab/matrix.hpp"

namespace hrlab {

double baseline_normalized(double score, double min_score, double max_score) {
    check(max_score > min_score, "baseline_normalized: max must exceed min");
    return (score - min_score) / (max_score - min_score);
}

double human_normalized(double score, double random_score, double human_score) {
    check(human_score != random_score,
          "human_normalized: human and random references coincide");
    return (score - random_score) / (human_score - random_score);
}

double success_normalized(double score, double random_ref, double target_ref) {
    check(target_ref != random_ref,
          "success_normalized: target and random references coincide");
    return (score - random_ref) / (target_ref - random_ref);
}

double median(std::vector<double> values) {
    check(!values.empty(), "median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2]
                      : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double iqm(std::vector<double> values) {
    check(!values.empty(), "iqm: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t drop = values.size() / 4;
    double sum = 0.0;
    for (std::size_t i = drop; i < values.size() - drop; ++i) sum += values[i];
    return sum / static_cast<double>(values.size() - 2 * drop);
}

double median_aggregate(
    const std::map<std::string, std::vector<double>>& per_task_scores) {
    check(!per_task_scores.empty(), "median_aggregate: empty input");
    std::vector<double> task_means;
    for (const auto& [task, scores] : per_task_scores) {
        check(!scores.empty(), "median_aggregate: task '" + task + "' has no scores");
        double s = 0.0;
        for (double v : scores) s += v;
        task_means.push_back(s / static_cast<double>(scores.size()));
    }
    return median(std::move(task_means));
}

NormalizationMethod normalization_from_name(const std::string& s) {
    if (s == "baseline") return NormalizationMethod::Baseline;
    if (s == "human") return NormalizationMethod::Human;
    if (s == "success") return NormalizationMethod::Success;
    throw std::invalid_argument("unknown normalization method: " + s);
}

AggregateMethod aggregate_from_name(const std::string& s) {
    if (s == "median") return AggregateMethod::Median;
    if (s == "iqm") return AggregateMethod::Iqm;
    throw std::invalid_argument("unknown aggregate method: " + s);
}

namespace {

double require(const std::optional<double>& v, const std::string& task,
               const char* field) {
    if (!v) throw std::invalid_argument("score table: task '" + task +
                                        "' is missing reference '" + field + "'");
    return *v;
}

double normalize_row(const ScoreRow& r, NormalizationMethod m) {
    switch (m) {
        case NormalizationMethod::Baseline:
            return baseline_normalized(r.score, require(r.baseline_min, r.task, "baseline_min"),
                                       require(r.baseline_max, r.task, "baseline_max"));
        case NormalizationMethod::Human:
            return human_normalized(r.score, require(r.random_ref, r.task, "random"),
                                    require(r.human_ref, r.task, "human"));
        case NormalizationMethod::Success:
            return success_normalized(r.score, require(r.random_ref, r.task, "random"),
                                      require(r.target_ref, r.task, "target"));
    }
    throw std::logic_error("normalize_row: unreachable");
}

}  // namespace

double aggregate_score_table(const std::vector<ScoreRow>& rows,
                             NormalizationMethod method, AggregateMethod aggregate) {
    check(!rows.empty(), "aggregate_score_table: empty table");
    std::map<std::string, std::vector<double>> per_task;
    for (const ScoreRow& r : rows) per_task[r.task].push_back(normalize_row(r, method));

    if (aggregate == AggregateMethod::Median) return median_aggregate(per_task);

    // IQM over seed-averaged per-task scores, mirroring the median path.
    std::vector<double> task_means;
    for (const auto& [task, scores] : per_task) {
        double s = 0.0;
        for (double v : scores) s += v;
        task_means.push_back(s / static_cast<double>(scores.size()));
    }
    return iqm(std::move(task_means));
}

std::vector<ScoreRow> load_score_table(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("score table: cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("score table: empty file");
    const std::string expected =
        "task,seed,score,random,human,target,baseline_min,baseline_max";
    if (line != expected)
        throw std::runtime_error("score table: bad header, expected '" + expected + "'");

    std::vector<ScoreRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        cells.resize(8);
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        try {
            ScoreRow r;
            r.task = cells[0];
            r.seed = cells[1].empty() ? 0 : std::stoull(cells[1]);
            r.score = std::stod(cells[2]);
            r.random_ref = opt(cells[3]);
            r.human_ref = opt(cells[4]);
            r.target_ref = opt(cells[5]);
            r.baseline_min = opt(cells[6]);
            r.baseline_max = opt(cells[7]);
            rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw std::runtime_error("score table: bad row at line " +
                                     std::to_string(lineno));
        }
    }
    return rows;
}

}  // namespace hrlab
