#include "hrlab/suite.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hrlab/checkpoint.hpp"
#include "hrlab/saturation.hpp"

namespace hrlab {

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string run_id_for(const TrainConfig& cfg) {
    return std::string(variant_name(cfg.variant)) + "-" +
           activation_name(cfg.activation) + "-s" + std::to_string(cfg.seed);
}

std::string metrics_csv(const std::vector<const TrainRunRecord*>& records) {
    std::string out =
        "run_id,variant,activation,seed,step,eval_return,return_normalized,"
        "dormant_fraction,effective_rank,live_contrib,dormant_contrib,loss\n";
    for (const TrainRunRecord* rec : records) {
        const TrainConfig& c = rec->config;
        const std::string prefix = run_id_for(c) + "," + variant_name(c.variant) +
                                   "," + activation_name(c.activation) + "," +
                                   std::to_string(c.seed) + ",";
        for (const DiagnosticCheckpoint& cp : rec->checkpoints) {
            out += prefix + std::to_string(cp.step) + "," + fmt(cp.eval_return) +
                   "," + fmt(cp.eval_return / rec->optimal_return) + "," +
                   fmt(cp.dormant_fraction) + "," +
                   std::to_string(cp.effective_rank) + "," + fmt(cp.live_contrib) +
                   "," + fmt(cp.dormant_contrib) + "," + fmt(cp.loss) + "\n";
        }
    }
    return out;
}

std::vector<MetricsRow> parse_metrics_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    check(static_cast<bool>(std::getline(is, line)), "metrics csv: empty");
    std::vector<MetricsRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        check(cells.size() == 12, "metrics csv: bad row '" + line + "'");
        MetricsRow r;
        r.run_id = cells[0];
        r.variant = cells[1];
        r.activation = cells[2];
        r.seed = std::stoull(cells[3]);
        r.step = std::stoull(cells[4]);
        r.eval_return = std::stod(cells[5]);
        r.return_normalized = std::stod(cells[6]);
        r.dormant_fraction = std::stod(cells[7]);
        r.effective_rank = std::stoull(cells[8]);
        r.live_contrib = std::stod(cells[9]);
        r.dormant_contrib = std::stod(cells[10]);
        r.loss = std::stod(cells[11]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("atomic_write: cannot open " + tmp);
        os << content;
        if (!os) throw std::runtime_error("atomic_write: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("atomic_write: rename failed for " + path);
}

namespace {

double seed_mean_final(const std::vector<RunResult>& runs, Variant v, Activation a,
                       double (*metric)(const DiagnosticCheckpoint&)) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const RunResult& r : runs) {
        if (!r.record || r.config.variant != v || r.config.activation != a) continue;
        sum += metric(r.record->final_checkpoint());
        ++n;
    }
    check(n > 0, std::string("no completed runs for ") + variant_name(v) + "-" +
                     activation_name(a));
    return sum / static_cast<double>(n);
}

}  // namespace

double seed_mean_final_dormancy(const std::vector<RunResult>& runs, Variant v,
                                Activation a) {
    return seed_mean_final(runs, v, a,
                           [](const DiagnosticCheckpoint& c) { return c.dormant_fraction; });
}

double seed_mean_final_rank(const std::vector<RunResult>& runs, Variant v,
                            Activation a) {
    return seed_mean_final(runs, v, a, [](const DiagnosticCheckpoint& c) {
        return static_cast<double>(c.effective_rank);
    });
}

double seed_mean_final_return(const std::vector<RunResult>& runs, Variant v,
                              Activation a) {
    return seed_mean_final(runs, v, a,
                           [](const DiagnosticCheckpoint& c) { return c.eval_return; });
}

SuiteResult run_experiment_suite(const SuiteConfig& config, std::ostream* log) {
    const auto t0 = std::chrono::steady_clock::now();

    std::string out_dir = config.output_dir;
    if (const char* env = std::getenv("HR_LAB_OUT"); env && *env) out_dir = env;
    std::filesystem::create_directories(out_dir);

    SuiteResult result;
    for (Variant v : config.variants) {
        for (Activation a : config.activations) {
            for (std::uint64_t seed : config.seeds) {
                TrainConfig tc = config.train;
                tc.variant = v;
                tc.activation = a;
                tc.seed = seed;
                RunResult rr;
                rr.config = tc;
                rr.run_id = run_id_for(tc);
                if (log) *log << "run " << rr.run_id << "..." << std::flush;
                try {
                    Network final_net;
                    rr.record = train_run(tc, &final_net);
                    save_checkpoint(final_net, out_dir + "/" + rr.run_id + ".ckpt");
                    if (log)
                        *log << " done (return "
                             << rr.record->final_checkpoint().eval_return << ")\n";
                } catch (const std::exception& e) {
                    rr.error = e.what();
                    result.all_ok = false;
                    if (log) *log << " FAILED: " << rr.error << "\n";
                }
                result.runs.push_back(std::move(rr));
            }
        }
    }

    std::vector<const TrainRunRecord*> completed;
    for (const RunResult& r : result.runs)
        if (r.record) completed.push_back(&*r.record);
    result.metrics_path = out_dir + "/metrics.csv";
    atomic_write(result.metrics_path, metrics_csv(completed));

    nlohmann::json manifest;
    manifest["config"] = config.canonical_text();
    manifest["config_hash"] = config.content_hash();
    manifest["seeds"] = config.seeds;
    manifest["runs_total"] = result.runs.size();
    manifest["runs_failed"] = result.runs.size() - completed.size();
    nlohmann::json failures = nlohmann::json::array();
    for (const RunResult& r : result.runs)
        if (!r.record) failures.push_back({{"run_id", r.run_id}, {"error", r.error}});
    manifest["failures"] = failures;

    nlohmann::json aggregates = nlohmann::json::object();
    for (Variant v : config.variants) {
        for (Activation a : config.activations) {
            bool any = false;
            for (const RunResult& r : result.runs)
                if (r.record && r.config.variant == v && r.config.activation == a)
                    any = true;
            if (!any) continue;
            const std::string key =
                std::string(variant_name(v)) + "-" + activation_name(a);
            aggregates[key] = {
                {"final_return_mean", seed_mean_final_return(result.runs, v, a)},
                {"final_dormant_fraction_mean",
                 seed_mean_final_dormancy(result.runs, v, a)},
                {"final_effective_rank_mean", seed_mean_final_rank(result.runs, v, a)},
            };
        }
    }
    // HR-vs-baseline dormancy shifts per activation, absolute and relative.
    for (Activation a : config.activations) {
        bool have_base = false, have_hr = false;
        for (const RunResult& r : result.runs) {
            if (!r.record || r.config.activation != a) continue;
            if (r.config.variant == Variant::Baseline) have_base = true;
            if (r.config.variant == Variant::Hr) have_hr = true;
        }
        if (!have_base || !have_hr) continue;
        const DormancyShift s = dormancy_shift(
            seed_mean_final_dormancy(result.runs, Variant::Baseline, a),
            seed_mean_final_dormancy(result.runs, Variant::Hr, a));
        aggregates[std::string("dormancy_shift-") + activation_name(a)] = {
            {"baseline", s.baseline_fraction},
            {"hr", s.hr_fraction},
            {"absolute_delta", s.absolute_delta},
            {"relative_delta", s.relative_delta},
        };
    }
    manifest["aggregates"] = aggregates;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    result.manifest_path = out_dir + "/manifest.json";
    atomic_write(result.manifest_path, manifest.dump(2) + "\n");
    return result;
}

}  // namespace hrlab
