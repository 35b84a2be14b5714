#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hrlab/layers.hpp"
#include "hrlab/matrix.hpp"
#include "hrlab/network.hpp"
#include "hrlab/rng.hpp"

namespace hrlab {

struct KdeOptions {
    double jitter_sigma2 = 1e-5;   // variance of the stabilizing jitter
    std::size_t grid_points = 512; // evaluation grid over [min-3bw, max+3bw]
};

/// Peak of the Gaussian KDE of the jittered activation sample, bandwidth by
/// Scott's rule bw = n^(-1/5) * std. Needs n >= 2.
double kde_peak_density(const std::vector<double>& activations, Rng& rng,
                        const KdeOptions& opts = {});

struct NeuronDormancy {
    bool dormant = false;
    double peak_density = 0.0;
    double omega_hat = 0.0;  // saturation side; meaningful only when dormant
    bool bimodal = false;    // tanh only: density mass on both sides crosses omega
};

struct DormancyReport {
    std::vector<NeuronDormancy> neurons;
    double fraction = 0.0;
    std::vector<std::size_t> dormant_indices() const;
};

struct DormancyOptions {
    double omega = 20.0;  // peak-density threshold
    KdeOptions kde;
};

/// Per-neuron dormancy over a feature matrix (rows = observations, cols =
/// neurons). Tanh: KDE peak >= omega. ReLU: KDE peak >= omega, or all
/// activations exactly zero.
DormancyReport classify_dormant(const Matrix& features, Activation act, Rng& rng,
                                const DormancyOptions& opts = {});

/// Number of leading singular values holding (1-delta) of the spectral mass:
/// d - #{i : cumsum(sigma)_i >= (1-delta)*sum(sigma)} + 1.
/// An all-zero matrix degenerates to rank 1 (degenerate flag set).
std::size_t effective_rank(const Matrix& phi, double delta, bool& degenerate);
std::size_t effective_rank(const Matrix& phi, double delta = 0.01);
std::size_t effective_rank_from_singular_values(const std::vector<double>& sv,
                                                double delta);

/// Exact partition of the next layer's pre-activation h = A z + b into the
/// live-neuron contribution, the constant vector injected by dormant neurons
/// at their saturation value, and the original bias.
struct BiasDecomposition {
    Matrix live;                    // 1 x out: sum over live i of z_i A[:,i]
    Matrix effective_dormant_bias;  // 1 x out: sum over dormant i of omega_i A[:,i]
    Matrix bias;                    // 1 x out: b
};

BiasDecomposition bias_decomposition(const Matrix& a_next, const Matrix& b_next,
                                     const std::vector<double>& z,
                                     const std::vector<std::size_t>& dormant_set,
                                     const std::vector<double>& omega_hat);

/// Mean absolute per-output contribution of live vs dormant final-hidden
/// neurons across the batch (rows = observations).
std::pair<double, double> contribution_split(const Network& net, const Matrix& batch,
                                             const DormancyReport& dormancy);

}  // namespace hrlab
