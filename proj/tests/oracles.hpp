// Test-only reference implementations, independent of the library's own
// numerical paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "hrlab/matrix.hpp"
#include "hrlab/network.hpp"
#include "hrlab/rng.hpp"

namespace oracle {

// Eigenvalues of a symmetric matrix via classic two-sided Jacobi rotations.
inline std::vector<double> sym_eigenvalues(hrlab::Matrix s) {
    const std::size_t n = s.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += s(i, j) * s(i, j);
        if (off < 1e-26) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (s(p, q) == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = s(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

// Singular values as square roots of the eigenvalues of the Gram matrix.
inline std::vector<double> singular_values(const hrlab::Matrix& m) {
    const hrlab::Matrix mt = m.transposed();
    const hrlab::Matrix gram = m.rows() >= m.cols() ? hrlab::matmul(mt, m)
                                                    : hrlab::matmul(m, mt);
    std::vector<double> eig = sym_eigenvalues(gram);
    for (double& e : eig) e = std::sqrt(std::max(0.0, e));
    return eig;
}

// Straight re-trace of the cumulative-spectral-mass rank rule.
inline std::size_t effective_rank(const std::vector<double>& sing_values_desc,
                                  double delta) {
    double nuclear = 0.0;
    for (double s : sing_values_desc) nuclear += s;
    const double threshold = (1.0 - delta) * nuclear;
    double cumsum = 0.0;
    std::size_t crossed = 0;
    for (double s : sing_values_desc) {
        cumsum += s;
        if (cumsum >= threshold) ++crossed;
    }
    return sing_values_desc.size() - crossed + 1;
}

inline hrlab::Matrix random_matrix(std::size_t rows, std::size_t cols, hrlab::Rng& rng,
                                   double scale = 1.0) {
    hrlab::Matrix m(rows, cols);
    for (double& v : m.raw()) v = rng.normal(0.0, scale);
    return m;
}

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t params_checked = 0;
};

// Central finite differences on L = sum(output (.) weights) against the
// network's analytic backward. Returns the worst relative error across every
// parameter entry.
inline GradCheckResult finite_difference_check(hrlab::Network& net,
                                               const hrlab::Matrix& x,
                                               const hrlab::Matrix& loss_weights,
                                               double h = 1e-5) {
    auto loss = [&]() {
        const hrlab::Matrix out = net.forward(x).output;
        double l = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i)
            l += out.raw()[i] * loss_weights.raw()[i];
        return l;
    };

    std::vector<hrlab::LayerCache> caches;
    net.forward_cached(x, caches);
    const std::vector<hrlab::Matrix> grads = net.backward(caches, loss_weights);

    GradCheckResult res;
    auto params = net.parameters();
    for (std::size_t p = 0; p < params.size(); ++p) {
        for (std::size_t k = 0; k < params[p]->size(); ++k) {
            double& theta = params[p]->raw()[k];
            const double orig = theta;
            theta = orig + h;
            const double lp = loss();
            theta = orig - h;
            const double lm = loss();
            theta = orig;
            const double fd = (lp - lm) / (2.0 * h);
            const double an = grads[p].raw()[k];
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-4});
            res.max_rel_error = std::max(res.max_rel_error, std::abs(fd - an) / denom);
            ++res.params_checked;
        }
    }
    return res;
}

// Finite-horizon value iteration for the corridor MDP: optimal discounted
// value from state 0 at step 0.
inline double chain_value_iteration(std::size_t n_states, std::size_t horizon,
                                    double gamma) {
    const std::size_t goal = n_states - 1;
    // v[t][s]: optimal value with t steps already taken.
    std::vector<std::vector<double>> v(horizon + 1, std::vector<double>(n_states, 0.0));
    for (std::size_t t = horizon; t-- > 0;) {
        for (std::size_t s = 0; s < n_states; ++s) {
            if (s == goal) continue;  // terminal
            double best = -1e300;
            for (int a = 0; a < 2; ++a) {
                const std::size_t next = a == 1 ? s + 1 : (s > 0 ? s - 1 : 0);
                double q;
                if (next == goal)
                    q = 1.0;
                else if (t + 1 >= horizon)
                    q = -0.01;
                else
                    q = -0.01 + gamma * v[t + 1][next];
                best = std::max(best, q);
            }
            v[t][s] = best;
        }
    }
    return v[0][0];
}

}  // namespace oracle
