#include "hrlab/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrlab/diagnostics.hpp"
#include "hrlab/adam.hpp"

namespace hrlab {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Baseline: return "baseline";
        case Variant::Hr: return "hr";
        case Variant::Widen: return "widen";
        case Variant::Hr2: return "hr2";
    }
    return "?";
}

Variant variant_from_name(const std::string& s) {
    if (s == "baseline") return Variant::Baseline;
    if (s == "hr") return Variant::Hr;
    if (s == "widen") return Variant::Widen;
    if (s == "hr2") return Variant::Hr2;
    throw std::invalid_argument("unknown variant: " + s);
}

Network build_variant(const TrainConfig& config, Rng& rng) {
    const std::size_t w = config.hidden_width;
    check(w > 0, "build_variant: zero hidden width");
    NetworkSpec spec;
    spec.input_dim = config.n_states + config.noise_dim;
    const Activation act = config.activation;
    const bool ln = config.with_layernorm;
    using K = LayerSpec::Kind;
    switch (config.variant) {
        case Variant::Baseline:
            spec.layers = {{K::Dense, w, act, ln}, {K::Dense, w, act, ln}};
            break;
        case Variant::Hr:
            spec.layers = {{K::Dense, w, act, ln}, {K::Hr, w, act, ln}};
            break;
        case Variant::Widen:
            spec.layers = {{K::Dense, w, act, ln}, {K::Dense, 2 * w, act, ln}};
            break;
        case Variant::Hr2:
            spec.layers = {{K::Dense, w, act, ln},
                           {K::Hr, w, act, ln},
                           {K::Hr, w, act, ln}};
            break;
    }
    spec.layers.push_back({K::Dense, ChainWorld::action_count(), Activation::Identity,
                           false});
    return init_network(spec, rng);
}

std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const Network& target_net, double gamma) {
    check(!batch.empty(), "td_targets: empty batch");
    const std::size_t dim = batch.front()->next_obs.size();
    Matrix next(batch.size(), dim);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        check(batch[i]->next_obs.size() == dim, "td_targets: observation dim mismatch");
        for (std::size_t j = 0; j < dim; ++j) next(i, j) = batch[i]->next_obs[j];
    }
    const Matrix q = target_net.forward(next).output;
    std::vector<double> y(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        double best = q(i, 0);
        for (std::size_t a = 1; a < q.cols(); ++a) best = std::max(best, q(i, a));
        y[i] = batch[i]->reward +
               (batch[i]->done ? 0.0 : gamma * best);
    }
    return y;
}

namespace {

Matrix row_matrix(const std::vector<double>& v) {
    Matrix m(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
    return m;
}

int greedy_action(const Network& net, const std::vector<double>& obs) {
    const Matrix q = net.forward(row_matrix(obs)).output;
    int best = 0;
    for (std::size_t a = 1; a < q.cols(); ++a)
        if (q(0, a) > q(0, best)) best = static_cast<int>(a);
    return best;
}

double evaluate_greedy(const Network& net, const TrainConfig& cfg, Rng& rng) {
    double total = 0.0;
    for (std::size_t e = 0; e < cfg.eval_episodes; ++e) {
        ChainWorld env(cfg.n_states, cfg.noise_dim);
        std::vector<double> obs = env.reset(rng);
        double ret = 0.0, disc = 1.0;
        while (!env.done()) {
            const int a = greedy_action(net, obs);
            auto r = env.step(static_cast<ChainAction>(a), rng);
            ret += disc * r.reward;
            disc *= cfg.gamma;
            obs = std::move(r.observation);
        }
        total += ret;
    }
    return total / static_cast<double>(cfg.eval_episodes);
}

// Observations for the initial diagnostic checkpoint, before the replay
// buffer holds anything: uniform-random rollouts in a scratch env.
Matrix probe_observations(const TrainConfig& cfg, std::size_t n, Rng& rng) {
    ChainWorld env(cfg.n_states, cfg.noise_dim);
    Matrix batch(n, env.observation_dim());
    std::vector<double> obs = env.reset(rng);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < obs.size(); ++j) batch(i, j) = obs[j];
        if (env.done()) {
            obs = env.reset(rng);
        } else {
            auto r = env.step(static_cast<ChainAction>(rng.uniform_index(2)), rng);
            obs = std::move(r.observation);
        }
    }
    return batch;
}

DiagnosticCheckpoint make_checkpoint(std::size_t step, const Network& net,
                                     const TrainConfig& cfg, const ReplayBuffer& buffer,
                                     double last_loss, Rng& rng) {
    DiagnosticCheckpoint cp;
    cp.step = step;
    cp.loss = last_loss;

    const Matrix obs_batch =
        buffer.size() > 0 ? buffer.sample_observations(cfg.diagnostics_batch, rng)
                          : probe_observations(cfg, cfg.diagnostics_batch, rng);
    const ForwardResult fr = net.forward(obs_batch);
    const Matrix& features = fr.hidden.back();

    DormancyOptions dopts;
    dopts.omega = cfg.dormancy_omega;
    dopts.kde.jitter_sigma2 = cfg.kde_jitter_sigma2;
    const DormancyReport report =
        classify_dormant(features, cfg.activation, rng, dopts);
    cp.dormant_fraction = report.fraction;
    cp.effective_rank = effective_rank(features);
    const auto [live, dormant] = contribution_split(net, obs_batch, report);
    cp.live_contrib = live;
    cp.dormant_contrib = dormant;
    cp.eval_return = evaluate_greedy(net, cfg, rng);
    return cp;
}

}  // namespace

TrainRunRecord train_run(const TrainConfig& config, Network* final_net) {
    check(config.batch_size > 0 && config.total_steps != SIZE_MAX,
          "train_run: invalid config");
    Rng rng(config.seed);
    ChainWorld env(config.n_states, config.noise_dim);
    Network net = build_variant(config, rng);
    Network target = net;
    AdamOptimizer adam(config.lr, config.adam_epsilon);
    ReplayBuffer buffer(config.buffer_capacity);
    EpsilonSchedule schedule{config.epsilon_start, config.epsilon_end,
                             std::max<std::size_t>(
                                 1, static_cast<std::size_t>(
                                        config.epsilon_decay_ratio *
                                        static_cast<double>(config.total_steps)))};

    TrainRunRecord record;
    record.config = config;
    record.optimal_return = env.optimal_return(config.gamma);

    double last_loss = 0.0;
    record.checkpoints.push_back(
        make_checkpoint(0, net, config, buffer, last_loss, rng));

    std::vector<double> obs = env.reset(rng);
    for (std::size_t step = 1; step <= config.total_steps; ++step) {
        const double eps = schedule.at(step - 1);
        const int action = rng.bernoulli(eps)
                               ? static_cast<int>(rng.uniform_index(2))
                               : greedy_action(net, obs);
        auto r = env.step(static_cast<ChainAction>(action), rng);
        buffer.push({obs, action, r.reward, r.observation, r.done});
        obs = r.done ? env.reset(rng) : std::move(r.observation);

        if (step >= config.train_start && buffer.size() >= config.batch_size) {
            const auto idx = buffer.sample_indices(config.batch_size, rng);
            std::vector<const Transition*> batch;
            batch.reserve(idx.size());
            for (std::size_t i : idx) batch.push_back(&buffer.at(i));
            const std::vector<double> y = td_targets(batch, target, config.gamma);

            Matrix states(batch.size(), env.observation_dim());
            for (std::size_t i = 0; i < batch.size(); ++i)
                for (std::size_t j = 0; j < batch[i]->obs.size(); ++j)
                    states(i, j) = batch[i]->obs[j];

            std::vector<LayerCache> caches;
            const Matrix q = net.forward_cached(states, caches);
            Matrix grad_out(q.rows(), q.cols());
            double loss = 0.0;
            const double inv_b = 1.0 / static_cast<double>(batch.size());
            for (std::size_t i = 0; i < batch.size(); ++i) {
                const double diff = q(i, batch[i]->action) - y[i];
                loss += diff * diff * inv_b;
                grad_out(i, batch[i]->action) = 2.0 * diff * inv_b;
            }
            if (!std::isfinite(loss))
                throw std::runtime_error("train_run: non-finite loss at step " +
                                         std::to_string(step));
            const std::vector<Matrix> grads = net.backward(caches, grad_out);
            adam.step(net.parameters(), grads);
            last_loss = loss;
        }

        if (step % config.target_sync_period == 0) target.copy_parameters_from(net);

        if (step % config.diagnostics_period == 0 || step == config.total_steps)
            record.checkpoints.push_back(
                make_checkpoint(step, net, config, buffer, last_loss, rng));
    }
    if (final_net) *final_net = std::move(net);
    return record;
}

}  // namespace hrlab
