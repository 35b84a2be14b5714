#pragma once

#include <cstddef>
#include <vector>

#include "hrlab/matrix.hpp"
#include "hrlab/rng.hpp"

namespace hrlab {

struct Transition {
    std::vector<double> obs;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool done = false;
};

/// Fixed-capacity FIFO ring of transitions with uniform batch sampling
/// (distinct indices within a batch).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
        check(capacity_ > 0, "ReplayBuffer: capacity must be positive");
    }

    std::size_t size() const { return ring_.size(); }
    std::size_t capacity() const { return capacity_; }

    void push(Transition t) {
        if (ring_.size() < capacity_) {
            ring_.push_back(std::move(t));
        } else {
            ring_[head_] = std::move(t);
            head_ = (head_ + 1) % capacity_;
        }
    }

    const Transition& at(std::size_t i) const { return ring_[i]; }

    /// batch_size distinct uniform indices (without replacement within the
    /// batch); requires batch_size <= size().
    std::vector<std::size_t> sample_indices(std::size_t batch_size, Rng& rng) const {
        check(batch_size <= ring_.size(), "ReplayBuffer: batch larger than buffer");
        // Floyd's sampling: distinct and O(batch) regardless of buffer size.
        std::vector<std::size_t> picked;
        picked.reserve(batch_size);
        for (std::size_t j = ring_.size() - batch_size; j < ring_.size(); ++j) {
            std::size_t t = rng.uniform_index(j + 1);
            bool dup = false;
            for (std::size_t p : picked)
                if (p == t) { dup = true; break; }
            picked.push_back(dup ? j : t);
        }
        return picked;
    }

    /// batch of observations for diagnostics, uniform with replacement so a
    /// request can exceed the current fill level.
    Matrix sample_observations(std::size_t n, Rng& rng) const {
        check(!ring_.empty(), "ReplayBuffer: empty");
        const std::size_t dim = ring_.front().obs.size();
        Matrix batch(n, dim);
        for (std::size_t i = 0; i < n; ++i) {
            const Transition& t = ring_[rng.uniform_index(ring_.size())];
            for (std::size_t j = 0; j < dim; ++j) batch(i, j) = t.obs[j];
        }
        return batch;
    }

private:
    std::size_t capacity_;
    std::size_t head_ = 0;
    std::vector<Transition> ring_;
};

/// Linear epsilon-greedy schedule, clamped at the final value.
struct EpsilonSchedule {
    double start = 1.0;
    double end = 0.1;
    std::size_t decay_steps = 1;

    double at(std::size_t step) const {
        if (step >= decay_steps) return end;
        const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
        return start + (end - start) * frac;
    }
};

}  // namespace hrlab
