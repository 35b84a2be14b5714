#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hrlab/matrix.hpp"

namespace hrlab {

enum class Activation { Identity, Tanh, Relu };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& s);

double activate(Activation a, double x);

/// Elementwise activation over a matrix (batch x features).
Matrix activation_apply(Activation a, const Matrix& pre);

struct LayerCache {
    Matrix input;                     // batch x in
    Matrix u1, v1, a1;                // pre-LN, pre-activation, activation
    std::vector<double> mu1, istd1;   // LayerNorm row stats (empty without LN)
    Matrix u2, v2, a2;                // second branch (HR only)
    std::vector<double> mu2, istd2;
    Matrix output;
};

/// A network stage operating on batches (rows = samples). backward()
/// appends parameter gradients in the same order as parameters().
class Layer {
public:
    virtual ~Layer() = default;
    virtual std::size_t in_dim() const = 0;
    virtual std::size_t out_dim() const = 0;
    virtual Matrix forward(const Matrix& x, LayerCache& cache) const = 0;
    virtual Matrix backward(const LayerCache& cache, const Matrix& grad_out,
                            std::vector<Matrix>& param_grads) const = 0;
    virtual std::vector<Matrix*> parameters() = 0;
    virtual std::vector<const Matrix*> parameters() const = 0;
    virtual std::vector<std::string> parameter_names() const = 0;
    virtual std::unique_ptr<Layer> clone() const = 0;
    /// Hidden layers feed the diagnostics' activation record; the linear head
    /// does not.
    virtual bool hidden() const = 0;
};

class DenseLayer : public Layer {
public:
    DenseLayer(Matrix weights, Matrix bias, Activation act, bool layer_norm = false);

    std::size_t in_dim() const override { return weights_.cols(); }
    std::size_t out_dim() const override { return weights_.rows(); }
    Matrix forward(const Matrix& x, LayerCache& cache) const override;
    Matrix backward(const LayerCache& cache, const Matrix& grad_out,
                    std::vector<Matrix>& param_grads) const override;
    std::vector<Matrix*> parameters() override;
    std::vector<const Matrix*> parameters() const override;
    std::vector<std::string> parameter_names() const override;
    std::unique_ptr<Layer> clone() const override;
    bool hidden() const override { return activation_ != Activation::Identity; }

    Activation activation() const { return activation_; }
    bool has_layer_norm() const { return layer_norm_; }
    const Matrix& weights() const { return weights_; }
    const Matrix& bias() const { return bias_; }

private:
    Matrix weights_;  // out x in
    Matrix bias_;     // 1 x out
    Activation activation_;
    bool layer_norm_;
    Matrix ln_gain_, ln_offset_;  // 1 x out, when layer_norm_
};

/// Hidden layer formed as the elementwise product of two independently
/// parameterized activation branches sharing the same input.
class HrLayer : public Layer {
public:
    HrLayer(Matrix w1, Matrix b1, Matrix w2, Matrix b2, Activation act,
            bool layer_norm = false);

    std::size_t in_dim() const override { return w1_.cols(); }
    std::size_t out_dim() const override { return w1_.rows(); }
    Matrix forward(const Matrix& x, LayerCache& cache) const override;
    Matrix backward(const LayerCache& cache, const Matrix& grad_out,
                    std::vector<Matrix>& param_grads) const override;
    std::vector<Matrix*> parameters() override;
    std::vector<const Matrix*> parameters() const override;
    std::vector<std::string> parameter_names() const override;
    std::unique_ptr<Layer> clone() const override;
    bool hidden() const override { return true; }

    Activation activation() const { return activation_; }
    bool has_layer_norm() const { return layer_norm_; }

private:
    Matrix w1_, b1_, w2_, b2_;
    Activation activation_;
    bool layer_norm_;
    Matrix ln_gain1_, ln_offset1_, ln_gain2_, ln_offset2_;
};

}  // namespace hrlab
