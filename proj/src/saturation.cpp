#include "hrlab/saturation.hpp"

#include <stdexcept>

#include "hrlab/matrix.hpp"

namespace hrlab {

namespace {
void validate(const CollapseModel& model) {
    check(model.p >= 0.0 && model.p <= 1.0, "collapse model: p must lie in [0,1]");
    check(model.activation != Activation::Identity,
          "collapse model: activation must be tanh or relu");
}
}  // namespace

double collapse_probability(const CollapseModel& model) {
    validate(model);
    return model.activation == Activation::Tanh ? model.p * model.p
                                                : 2.0 * model.p - model.p * model.p;
}

double monte_carlo_collapse(const CollapseModel& model, std::size_t trials, Rng& rng) {
    validate(model);
    check(trials >= 1, "monte_carlo_collapse: trials must be >= 1");
    std::size_t collapses = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const bool s1 = rng.bernoulli(model.p);
        const bool s2 = rng.bernoulli(model.p);
        const bool collapsed =
            model.activation == Activation::Tanh ? (s1 && s2) : (s1 || s2);
        if (collapsed) ++collapses;
    }
    return static_cast<double>(collapses) / static_cast<double>(trials);
}

DormancyShift dormancy_shift(double baseline_fraction, double hr_fraction) {
    check(baseline_fraction >= 0.0 && hr_fraction >= 0.0,
          "dormancy_shift: fractions must be non-negative");
    DormancyShift s;
    s.baseline_fraction = baseline_fraction;
    s.hr_fraction = hr_fraction;
    s.absolute_delta = hr_fraction - baseline_fraction;
    s.relative_delta = baseline_fraction == 0.0
                           ? 0.0
                           : s.absolute_delta / baseline_fraction;
    return s;
}

}  // namespace hrlab
