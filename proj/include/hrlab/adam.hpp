#pragma once

#include <vector>

#include "hrlab/matrix.hpp"

namespace hrlab {

/// Adam with bias correction. Moment buffers are created lazily on the first
/// step and must keep matching the parameter shapes afterwards.
class AdamOptimizer {
public:
    explicit AdamOptimizer(double lr, double epsilon = 1e-5, double beta1 = 0.9,
                           double beta2 = 0.999)
        : lr_(lr), eps_(epsilon), beta1_(beta1), beta2_(beta2) {}

    void step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads);

    std::size_t step_count() const { return t_; }
    double learning_rate() const { return lr_; }

private:
    double lr_, eps_, beta1_, beta2_;
    std::size_t t_ = 0;
    std::vector<Matrix> m_, v_;
};

}  // namespace hrlab
