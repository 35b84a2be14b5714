#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrlab/chain_world.hpp"
#include "hrlab/network.hpp"
#include "hrlab/replay.hpp"

namespace hrlab {

enum class Variant { Baseline, Hr, Widen, Hr2 };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& s);

struct TrainConfig {
    Variant variant = Variant::Baseline;
    Activation activation = Activation::Tanh;
    bool with_layernorm = false;
    std::uint64_t seed = 0;
    std::size_t total_steps = 60000;

    std::size_t hidden_width = 128;
    std::size_t buffer_capacity = 10000;
    std::size_t batch_size = 32;
    std::size_t target_sync_period = 200;
    std::size_t train_start = 500;
    double gamma = 0.99;
    double lr = 1e-4;
    double adam_epsilon = 1e-5;
    double epsilon_start = 1.0;
    double epsilon_end = 0.1;
    double epsilon_decay_ratio = 0.1;  // fraction of total_steps

    std::size_t diagnostics_period = 2000;
    std::size_t diagnostics_batch = 512;
    std::size_t eval_episodes = 10;
    double dormancy_omega = 20.0;
    double kde_jitter_sigma2 = 1e-5;

    std::size_t n_states = 24;
    std::size_t noise_dim = 8;
};

struct DiagnosticCheckpoint {
    std::size_t step = 0;
    double eval_return = 0.0;        // discounted, mean over greedy episodes
    double dormant_fraction = 0.0;   // final hidden layer
    std::size_t effective_rank = 0;  // final hidden layer features
    double live_contrib = 0.0;
    double dormant_contrib = 0.0;
    double loss = 0.0;               // most recent training loss
};

struct TrainRunRecord {
    TrainConfig config;
    double optimal_return = 0.0;
    std::vector<DiagnosticCheckpoint> checkpoints;

    const DiagnosticCheckpoint& final_checkpoint() const { return checkpoints.back(); }
};

/// Q-network for the given ablation variant. Baseline: two dense hidden
/// layers (width w). Hr: final hidden stage replaced by a Hadamard layer.
/// Widen: final hidden width doubled (parameter-matched to Hr). Hr2: two
/// stacked Hadamard stages.
Network build_variant(const TrainConfig& config, Rng& rng);

/// y = r + gamma * max_a Qtarget(s', a) * (1 - done), one entry per transition.
std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const Network& target_net, double gamma);

/// Full training loop: epsilon-greedy collection, replay sampling, Adam
/// updates, periodic target sync, diagnostics every diagnostics_period steps.
/// Deterministic given (config, seed). Throws std::runtime_error naming the
/// step if the loss turns non-finite. When final_net is given it receives the
/// trained network, for checkpointing.
TrainRunRecord train_run(const TrainConfig& config, Network* final_net = nullptr);

}  // namespace hrlab
