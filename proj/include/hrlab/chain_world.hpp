#pragma once

#include <cstddef>
#include <vector>

#include "hrlab/rng.hpp"

namespace hrlab {

enum class ChainAction { Left = 0, Right = 1 };

/// Deterministic corridor MDP. RIGHT moves +1, LEFT moves -1 (clamped at 0);
/// reaching state n-1 pays +1 and ends the episode, every other step pays
/// -0.01. Observations are one-hot(state) plus noise_dim standard-normal
/// distractor features, so the diagnostics see a nontrivial feature space.
class ChainWorld {
public:
    ChainWorld(std::size_t n_states = 24, std::size_t noise_dim = 8,
               std::size_t horizon = 0 /* 0 -> 4*n_states */);

    std::size_t n_states() const { return n_states_; }
    std::size_t observation_dim() const { return n_states_ + noise_dim_; }
    static constexpr std::size_t action_count() { return 2; }
    std::size_t horizon() const { return horizon_; }
    std::size_t state() const { return state_; }
    bool done() const { return done_; }

    std::vector<double> reset(Rng& rng);

    struct StepResult {
        std::vector<double> observation;
        double reward = 0.0;
        bool done = false;
    };
    /// Throws std::logic_error if called after the episode ended.
    StepResult step(ChainAction action, Rng& rng);

    /// Exact discounted return of the always-RIGHT policy from state 0, which
    /// is optimal by construction.
    double optimal_return(double gamma) const;

private:
    std::vector<double> observe(Rng& rng) const;

    std::size_t n_states_, noise_dim_, horizon_;
    std::size_t state_ = 0;
    std::size_t steps_taken_ = 0;
    bool done_ = false;
};

}  // namespace hrlab
