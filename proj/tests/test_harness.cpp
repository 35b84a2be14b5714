#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrlab/scores.hpp"
#include "hrlab/suite.hpp"

using namespace hrlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SuiteConfig tiny_suite() {
    SuiteConfig cfg;
    cfg.variants = {Variant::Baseline, Variant::Hr};
    cfg.activations = {Activation::Tanh};
    cfg.seeds = {1};
    cfg.train.n_states = 5;
    cfg.train.noise_dim = 2;
    cfg.train.hidden_width = 8;
    cfg.train.buffer_capacity = 128;
    cfg.train.batch_size = 8;
    cfg.train.train_start = 16;
    cfg.train.target_sync_period = 40;
    cfg.train.total_steps = 120;
    cfg.train.diagnostics_period = 60;
    cfg.train.diagnostics_batch = 32;
    cfg.train.eval_episodes = 2;
    return cfg;
}

}  // namespace

TEST_CASE("baseline normalization: endpoints map to 0 and 1") {
    CHECK(baseline_normalized(10.0, 10.0, 20.0) == 0.0);
    CHECK(baseline_normalized(20.0, 10.0, 20.0) == 1.0);
    CHECK(baseline_normalized(25.0, 10.0, 20.0) == 1.5);
    CHECK_THROWS_AS(baseline_normalized(1.0, 5.0, 5.0), std::invalid_argument);
}

TEST_CASE("human normalization: endpoints map to 0 and 1") {
    CHECK(human_normalized(3.0, 3.0, 9.0) == 0.0);
    CHECK(human_normalized(9.0, 3.0, 9.0) == 1.0);
    CHECK(human_normalized(6.0, 3.0, 9.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(human_normalized(1.0, 4.0, 4.0), std::invalid_argument);
}

TEST_CASE("success normalization matches the published reference rows") {
    // h1-walk: random 2.38, target 700.
    CHECK(success_normalized(700.0, 2.38, 700.0) == 1.0);
    CHECK(success_normalized(2.38, 2.38, 700.0) == 0.0);
    // h1-crawl sits at its random floor; h1-pole halfway to target.
    CHECK(success_normalized(272.66, 272.66, 700.0) == 0.0);
    CHECK(success_normalized(360.045, 20.09, 700.0) == doctest::Approx(0.5));
}

TEST_CASE("reference table on disk carries the expected rows") {
    std::ifstream in("data/humanoidbench_refs.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "task,random,target");
    bool found_walk = false, found_crawl = false;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string task, random_s, target_s;
        std::getline(ss, task, ',');
        std::getline(ss, random_s, ',');
        std::getline(ss, target_s, ',');
        if (task == "h1-walk") {
            found_walk = true;
            CHECK(std::stod(random_s) == doctest::Approx(2.38));
            CHECK(std::stod(target_s) == 700.0);
        }
        if (task == "h1-crawl") {
            found_crawl = true;
            CHECK(std::stod(random_s) == doctest::Approx(272.66));
        }
    }
    CHECK(found_walk);
    CHECK(found_crawl);
}

TEST_CASE("median: odd and even counts") {
    CHECK(median({0.5, 0.1, 0.9}) == 0.5);
    CHECK(median({0.8, 0.2, 0.6, 0.4}) == doctest::Approx(0.5));
    CHECK(median({7.0}) == 7.0);
    CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("iqm: drops floor(n/4) from each end") {
    CHECK(iqm({100.0, 1.0, 0.0, 2.0}) == doctest::Approx(1.5));
    CHECK(iqm({3.0, 3.0, 3.0, 3.0, 3.0}) == 3.0);
    // n = 3 drops nothing: plain mean.
    CHECK(iqm({1.0, 2.0, 6.0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(iqm({}), std::invalid_argument);
}

TEST_CASE("median aggregate averages seeds before taking the task median") {
    std::map<std::string, std::vector<double>> scores{
        {"a", {0.0, 1.0}},   // mean 0.5
        {"b", {0.9, 0.9}},   // mean 0.9
        {"c", {0.2}},        // mean 0.2
    };
    CHECK(median_aggregate(scores) == doctest::Approx(0.5));
}

TEST_CASE("aggregate_score_table: seed order does not matter") {
    std::vector<ScoreRow> rows;
    for (double s : {1.0, 3.0}) {
        ScoreRow r;
        r.task = "t1";
        r.score = s;
        r.random_ref = 0.0;
        r.target_ref = 4.0;
        rows.push_back(r);
    }
    const double fwd = aggregate_score_table(rows, NormalizationMethod::Success,
                                             AggregateMethod::Median);
    std::swap(rows[0], rows[1]);
    const double rev = aggregate_score_table(rows, NormalizationMethod::Success,
                                             AggregateMethod::Median);
    CHECK(fwd == rev);
    CHECK(fwd == doctest::Approx(0.5));
}

TEST_CASE("aggregate_score_table rejects rows missing the needed references") {
    ScoreRow r;
    r.task = "t";
    r.score = 1.0;
    CHECK_THROWS_AS(aggregate_score_table({r}, NormalizationMethod::Success,
                                          AggregateMethod::Iqm),
                    std::invalid_argument);
}

TEST_CASE("method names parse and reject junk") {
    CHECK(normalization_from_name("success") == NormalizationMethod::Success);
    CHECK(normalization_from_name("baseline") == NormalizationMethod::Baseline);
    CHECK(normalization_from_name("human") == NormalizationMethod::Human);
    CHECK(aggregate_from_name("iqm") == AggregateMethod::Iqm);
    CHECK(aggregate_from_name("median") == AggregateMethod::Median);
    CHECK_THROWS_AS(normalization_from_name("zscore"), std::invalid_argument);
    CHECK_THROWS_AS(aggregate_from_name("mean"), std::invalid_argument);
}

TEST_CASE("config parser: round-trip of a small file") {
    const std::string text =
        "[experiment]\n"
        "variants = baseline, hr\n"
        "activations = tanh, relu\n"
        "seeds = 1, 2, 3\n"
        "total_steps = 5000\n"
        "\n"
        "[train]\n"
        "lr = 0.0001\n"
        "# a comment\n"
        "hidden_width = 32\n"
        "\n"
        "[output]\n"
        "dir = results\n";
    const SuiteConfig cfg = parse_config_text(text);
    CHECK(cfg.variants == std::vector<Variant>{Variant::Baseline, Variant::Hr});
    CHECK(cfg.activations ==
          std::vector<Activation>{Activation::Tanh, Activation::Relu});
    CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(cfg.train.total_steps == 5000);
    CHECK(cfg.train.lr == 0.0001);
    CHECK(cfg.train.hidden_width == 32);
    CHECK(cfg.output_dir == "results");
}

TEST_CASE("config parser: unknown keys and sections are hard errors") {
    CHECK_THROWS_AS(parse_config_text("[experiment]\nvariantz = hr\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[experimint]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[experiment]\ntotal_steps = soon\n"),
                    ConfigError);
}

TEST_CASE("config hash ignores key order but not values") {
    const SuiteConfig a =
        parse_config_text("[train]\nbatch_size = 100\nlr = 0.001\n");
    const SuiteConfig b =
        parse_config_text("[train]\nlr = 0.001\nbatch_size = 100\n");
    const SuiteConfig c =
        parse_config_text("[train]\nlr = 0.002\nbatch_size = 100\n");
    CHECK(a.content_hash() == b.content_hash());
    CHECK(a.content_hash() != c.content_hash());
    CHECK(a.content_hash().size() == 16);
}

TEST_CASE("run ids name the grid point") {
    TrainConfig cfg;
    cfg.variant = Variant::Hr;
    cfg.activation = Activation::Relu;
    cfg.seed = 3;
    CHECK(run_id_for(cfg) == "hr-relu-s3");
}

TEST_CASE("metrics csv round-trips through the parser") {
    TrainConfig cfg = tiny_suite().train;
    cfg.variant = Variant::Hr;
    cfg.seed = 5;
    const TrainRunRecord rec = train_run(cfg);
    const std::string csv = metrics_csv({&rec});
    const auto rows = parse_metrics_csv(csv);
    REQUIRE(rows.size() == rec.checkpoints.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].run_id == "hr-tanh-s5");
        CHECK(rows[i].step == rec.checkpoints[i].step);
        CHECK(rows[i].eval_return == rec.checkpoints[i].eval_return);
        CHECK(rows[i].return_normalized ==
              doctest::Approx(rec.checkpoints[i].eval_return / rec.optimal_return)
                  .epsilon(1e-12));
        CHECK(rows[i].dormant_fraction == rec.checkpoints[i].dormant_fraction);
        CHECK(rows[i].effective_rank == rec.checkpoints[i].effective_rank);
    }
}

TEST_CASE("suite run writes metrics and manifest, deterministically") {
    SuiteConfig cfg = tiny_suite();
    const fs::path dir = fs::temp_directory_path() / "hrlab_suite_test";
    fs::remove_all(dir);
    cfg.output_dir = (dir / "a").string();
    const SuiteResult first = run_experiment_suite(cfg);
    CHECK(first.all_ok);
    REQUIRE(fs::exists(first.metrics_path));
    REQUIRE(fs::exists(first.manifest_path));

    cfg.output_dir = (dir / "b").string();
    const SuiteResult second = run_experiment_suite(cfg);
    CHECK(slurp(first.metrics_path) == slurp(second.metrics_path));

    const auto rows = parse_metrics_csv(slurp(first.metrics_path));
    CHECK(rows.size() == 2 * 3);  // 2 runs, 3 checkpoints each
    fs::remove_all(dir);
}

TEST_CASE("suite run with an empty grid still writes an empty table") {
    SuiteConfig cfg = tiny_suite();
    cfg.seeds = {};
    const fs::path dir = fs::temp_directory_path() / "hrlab_suite_empty";
    fs::remove_all(dir);
    cfg.output_dir = dir.string();
    const SuiteResult res = run_experiment_suite(cfg);
    CHECK(res.all_ok);
    CHECK(res.runs.empty());
    CHECK(parse_metrics_csv(slurp(res.metrics_path)).empty());
    fs::remove_all(dir);
}
