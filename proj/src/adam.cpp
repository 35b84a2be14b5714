#include "hrlab/adam.hpp"

#include <cmath>

namespace hrlab {

void AdamOptimizer::step(const std::vector<Matrix*>& params,
                         const std::vector<Matrix>& grads) {
    check(params.size() == grads.size(), "AdamOptimizer: param/grad count mismatch");
    if (m_.empty()) {
        for (const Matrix* p : params) {
            m_.emplace_back(p->rows(), p->cols());
            v_.emplace_back(p->rows(), p->cols());
        }
    }
    check(m_.size() == params.size(), "AdamOptimizer: state size mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& p = *params[i];
        const Matrix& g = grads[i];
        check(p.rows() == g.rows() && p.cols() == g.cols(),
              "AdamOptimizer: gradient shape mismatch");
        for (std::size_t k = 0; k < p.size(); ++k) {
            double& m = m_[i].raw()[k];
            double& v = v_[i].raw()[k];
            const double gk = g.raw()[k];
            m = beta1_ * m + (1.0 - beta1_) * gk;
            v = beta2_ * v + (1.0 - beta2_) * gk * gk;
            const double mhat = m / bc1;
            const double vhat = v / bc2;
            p.raw()[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

}  // namespace hrlab
