#include "hrlab/chain_world.hpp"

#include <stdexcept>

#include "hrlab/matrix.hpp"

namespace hrlab {

ChainWorld::ChainWorld(std::size_t n_states, std::size_t noise_dim, std::size_t horizon)
    : n_states_(n_states),
      noise_dim_(noise_dim),
      horizon_(horizon == 0 ? 4 * n_states : horizon) {
    check(n_states_ >= 2, "ChainWorld: need at least 2 states");
}

std::vector<double> ChainWorld::observe(Rng& rng) const {
    std::vector<double> obs(observation_dim(), 0.0);
    obs[state_] = 1.0;
    for (std::size_t i = 0; i < noise_dim_; ++i) obs[n_states_ + i] = rng.normal();
    return obs;
}

std::vector<double> ChainWorld::reset(Rng& rng) {
    state_ = 0;
    steps_taken_ = 0;
    done_ = false;
    return observe(rng);
}

ChainWorld::StepResult ChainWorld::step(ChainAction action, Rng& rng) {
    if (done_) throw std::logic_error("ChainWorld::step called after episode end");
    if (action == ChainAction::Right) {
        ++state_;
    } else if (state_ > 0) {
        --state_;
    }
    ++steps_taken_;

    StepResult r;
    if (state_ == n_states_ - 1) {
        r.reward = 1.0;
        done_ = true;
    } else {
        r.reward = -0.01;
        if (steps_taken_ >= horizon_) done_ = true;
    }
    r.done = done_;
    r.observation = observe(rng);
    return r;
}

double ChainWorld::optimal_return(double gamma) const {
    // n-1 RIGHT steps from state 0; the last one pays +1, the rest -0.01.
    double ret = 0.0;
    double disc = 1.0;
    for (std::size_t t = 0; t + 2 < n_states_; ++t) {
        ret += disc * -0.01;
        disc *= gamma;
    }
    return ret + disc * 1.0;
}

}  // namespace hrlab
