#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrlab/checkpoint.hpp"
#include "hrlab/config.hpp"
#include "hrlab/diagnostics.hpp"
#include "hrlab/saturation.hpp"
#include "hrlab/scores.hpp"
#include "hrlab/suite.hpp"

namespace {

hrlab::Matrix load_numeric_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged csv in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty csv " + path);
    hrlab::Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

struct PGrid {
    double lo = 0.05, hi = 0.95, step = 0.05;
};

PGrid parse_p_grid(const std::string& s) {
    PGrid g;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &g.lo, &g.hi, &g.step) != 3 ||
        g.step <= 0.0 || g.lo < 0.0 || g.hi > 1.0 || g.lo > g.hi)
        throw hrlab::ConfigError("bad --p-grid '" + s + "', expected lo:hi:step");
    return g;
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<std::string> variant) {
    hrlab::SuiteConfig cfg = hrlab::load_config(config_path);
    if (seed) cfg.seeds = {*seed};
    if (variant) {
        try {
            cfg.variants = {hrlab::variant_from_name(*variant)};
        } catch (const std::invalid_argument& e) {
            throw hrlab::ConfigError(e.what());
        }
    }
    const hrlab::SuiteResult res = hrlab::run_experiment_suite(cfg, &std::cerr);
    std::cout << "metrics: " << res.metrics_path << "\n"
              << "manifest: " << res.manifest_path << "\n";
    return res.all_ok ? 0 : 1;
}

int cmd_diagnose(const std::string& checkpoint_path, const std::string& features_path,
                 double omega, std::uint64_t seed) {
    const hrlab::Network net = hrlab::load_checkpoint(checkpoint_path);
    const hrlab::Matrix obs = load_numeric_csv(features_path);
    const hrlab::ForwardResult fr = net.forward(obs);
    if (fr.hidden.empty()) throw std::runtime_error("network has no hidden layers");
    const hrlab::Matrix& features = fr.hidden.back();

    hrlab::Activation act = hrlab::Activation::Tanh;
    for (std::size_t i = net.layer_count(); i-- > 0;) {
        if (const auto* d = dynamic_cast<const hrlab::DenseLayer*>(&net.layer(i))) {
            if (d->activation() == hrlab::Activation::Identity) continue;
            act = d->activation();
            break;
        }
        if (const auto* h = dynamic_cast<const hrlab::HrLayer*>(&net.layer(i))) {
            act = h->activation();
            break;
        }
    }

    hrlab::Rng rng(seed);
    hrlab::DormancyOptions opts;
    opts.omega = omega;
    const hrlab::DormancyReport report =
        hrlab::classify_dormant(features, act, rng, opts);
    const std::size_t rank = hrlab::effective_rank(features);
    const auto [live, dormant] = hrlab::contribution_split(net, obs, report);

    std::cout << "observations: " << obs.rows() << "\n"
              << "final_hidden_width: " << features.cols() << "\n"
              << "dormant_fraction: " << report.fraction << "\n"
              << "effective_rank: " << rank << "\n"
              << "live_contribution: " << live << "\n"
              << "dormant_contribution: " << dormant << "\n";
    for (std::size_t i = 0; i < report.neurons.size(); ++i) {
        const auto& n = report.neurons[i];
        if (!n.dormant) continue;
        std::cout << "dormant_neuron " << i << " peak=" << n.peak_density
                  << " omega_hat=" << n.omega_hat << (n.bimodal ? " bimodal" : "")
                  << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& p_grid, std::size_t trials, std::uint64_t seed,
                 const std::string& out_path) {
    const PGrid g = parse_p_grid(p_grid);
    std::string csv = "p,activation,closed_form,monte_carlo,trials\n";
    char buf[160];
    hrlab::Rng rng(seed);
    for (hrlab::Activation act : {hrlab::Activation::Tanh, hrlab::Activation::Relu}) {
        for (double p = g.lo; p <= g.hi + 1e-12; p += g.step) {
            hrlab::CollapseModel model{act, p};
            const double closed = hrlab::collapse_probability(model);
            const double mc = hrlab::monte_carlo_collapse(model, trials, rng);
            std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%zu\n", p,
                          hrlab::activation_name(act), closed, mc, trials);
            csv += buf;
        }
    }
    if (out_path.empty())
        std::cout << csv;
    else
        hrlab::atomic_write(out_path, csv);
    return 0;
}

int cmd_score(const std::string& table_path, const std::string& method,
              const std::string& aggregate) {
    hrlab::NormalizationMethod norm;
    hrlab::AggregateMethod agg;
    try {
        norm = hrlab::normalization_from_name(method);
        agg = hrlab::aggregate_from_name(aggregate);
    } catch (const std::invalid_argument& e) {
        throw hrlab::ConfigError(e.what());
    }
    const auto rows = hrlab::load_score_table(table_path);
    const double value = hrlab::aggregate_score_table(rows, norm, agg);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g\n", value);
    std::cout << buf;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hadamard-representation experiment lab"};
    app.require_subcommand(1);

    auto* train = app.add_subcommand("train", "run the configured experiment grid");
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> variant_override;
    train->add_option("--config", config_path, "suite config file")->required();
    train->add_option("--seed", seed_override, "run a single seed");
    train->add_option("--variant", variant_override, "run a single variant");

    auto* diagnose = app.add_subcommand("diagnose",
                                        "dormancy/rank/bias report for a checkpoint");
    std::string checkpoint_path, features_path;
    double omega = 20.0;
    std::uint64_t diag_seed = 0;
    diagnose->add_option("--checkpoint", checkpoint_path, "network checkpoint")
        ->required();
    diagnose->add_option("--features", features_path,
                         "csv of observations, one row per sample")
        ->required();
    diagnose->add_option("--omega", omega, "dormancy peak threshold");
    diagnose->add_option("--seed", diag_seed, "jitter seed");

    auto* simulate = app.add_subcommand("simulate-saturation",
                                        "closed form vs Monte Carlo collapse model");
    std::string p_grid = "0.05:0.95:0.05", sim_out;
    std::size_t trials = 1000000;
    std::uint64_t sim_seed = 0;
    simulate->add_option("--p-grid", p_grid, "lo:hi:step grid of p");
    simulate->add_option("--trials", trials, "Monte Carlo trials per p");
    simulate->add_option("--seed", sim_seed, "rng seed");
    simulate->add_option("--out", sim_out, "output csv (default stdout)");

    auto* score = app.add_subcommand("score", "normalize and aggregate a score table");
    std::string table_path, method = "baseline", aggregate = "median";
    score->add_option("--table", table_path, "score table csv")->required();
    score->add_option("--method", method, "baseline|human|success");
    score->add_option("--aggregate", aggregate, "median|iqm");

    try {
        app.parse(argc, argv);
        if (*train) return cmd_train(config_path, seed_override, variant_override);
        if (*diagnose)
            return cmd_diagnose(checkpoint_path, features_path, omega, diag_seed);
        if (*simulate) return cmd_simulate(p_grid, trials, sim_seed, sim_out);
        if (*score) return cmd_score(table_path, method, aggregate);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const hrlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
