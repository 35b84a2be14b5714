#pragma once

#include <cstddef>

#include "hrlab/layers.hpp"
#include "hrlab/rng.hpp"

namespace hrlab {

/// Per-branch saturation probability model for a Hadamard neuron.
struct CollapseModel {
    Activation activation = Activation::Tanh;  // Tanh or Relu
    double p = 0.0;                            // single-branch saturation probability
};

/// Closed form: tanh collapses only when both branches saturate (p^2); relu
/// collapses when either does (2p - p^2).
double collapse_probability(const CollapseModel& model);

/// Empirical frequency over independent Bernoulli(p) branch pairs.
double monte_carlo_collapse(const CollapseModel& model, std::size_t trials, Rng& rng);

/// Dormancy shift of an HR variant against its baseline, reported both ways
/// since relative percentages and absolute probabilities are easy to conflate.
struct DormancyShift {
    double baseline_fraction = 0.0;
    double hr_fraction = 0.0;
    double absolute_delta = 0.0;  // hr - baseline
    double relative_delta = 0.0;  // (hr - baseline) / baseline
};

DormancyShift dormancy_shift(double baseline_fraction, double hr_fraction);

}  // namespace hrlab
