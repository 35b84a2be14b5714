#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hrlab/layers.hpp"
#include "hrlab/rng.hpp"

namespace hrlab {

struct LayerSpec {
    enum class Kind { Dense, Hr };
    Kind kind = Kind::Dense;
    std::size_t width = 0;
    Activation activation = Activation::Tanh;
    bool layer_norm = false;
};

struct NetworkSpec {
    std::size_t input_dim = 0;
    std::vector<LayerSpec> layers;  // last entry is the head
};

struct ForwardResult {
    Matrix output;
    std::vector<Matrix> hidden;  // activation record, one matrix per hidden layer
};

class Network {
public:
    Network() = default;
    explicit Network(std::vector<std::unique_ptr<Layer>> layers);
    Network(const Network& o);
    Network& operator=(const Network& o);
    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    std::size_t layer_count() const { return layers_.size(); }
    const Layer& layer(std::size_t i) const { return *layers_[i]; }
    Layer& layer(std::size_t i) { return *layers_[i]; }

    /// Batch forward pass; x is batch x input_dim.
    ForwardResult forward(const Matrix& x) const;

    /// Forward keeping per-layer caches for a subsequent backward().
    Matrix forward_cached(const Matrix& x, std::vector<LayerCache>& caches) const;

    /// Backprop of dL/d(output). Returns flat parameter gradients in
    /// parameters() order.
    std::vector<Matrix> backward(const std::vector<LayerCache>& caches,
                                 const Matrix& grad_output) const;

    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;
    std::vector<std::string> parameter_names() const;  // e.g. "layer1.branch2.A"
    std::size_t parameter_count() const;

    void copy_parameters_from(const Network& o);

private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

/// Fresh network with every affine branch initialized from
/// U(-1/sqrt(fan_in), 1/sqrt(fan_in)), weights and biases alike; HR branches
/// are independent draws from the same scheme.
Network init_network(const NetworkSpec& spec, Rng& rng);

}  // namespace hrlab
