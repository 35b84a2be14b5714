#include "hrlab/network.hpp"

#include <cmath>
#include <stdexcept>

namespace hrlab {

Network::Network(std::vector<std::unique_ptr<Layer>> layers)
    : layers_(std::move(layers)) {
    check(!layers_.empty(), "Network: no layers");
    for (std::size_t i = 1; i < layers_.size(); ++i)
        check(layers_[i]->in_dim() == layers_[i - 1]->out_dim(),
              "Network: adjacent layer dims do not chain");
}

Network::Network(const Network& o) {
    layers_.reserve(o.layers_.size());
    for (const auto& l : o.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& o) {
    if (this == &o) return *this;
    layers_.clear();
    layers_.reserve(o.layers_.size());
    for (const auto& l : o.layers_) layers_.push_back(l->clone());
    return *this;
}

std::size_t Network::input_dim() const { return layers_.front()->in_dim(); }
std::size_t Network::output_dim() const { return layers_.back()->out_dim(); }

ForwardResult Network::forward(const Matrix& x) const {
    ForwardResult r;
    Matrix cur = x;
    LayerCache cache;
    for (const auto& l : layers_) {
        cur = l->forward(cur, cache);
        if (l->hidden()) r.hidden.push_back(cur);
    }
    r.output = std::move(cur);
    return r;
}

Matrix Network::forward_cached(const Matrix& x, std::vector<LayerCache>& caches) const {
    caches.assign(layers_.size(), LayerCache{});
    Matrix cur = x;
    for (std::size_t i = 0; i < layers_.size(); ++i)
        cur = layers_[i]->forward(cur, caches[i]);
    return cur;
}

std::vector<Matrix> Network::backward(const std::vector<LayerCache>& caches,
                                      const Matrix& grad_output) const {
    if (caches.size() != layers_.size())
        throw std::logic_error("Network::backward: cache count mismatch");
    std::vector<std::vector<Matrix>> per_layer(layers_.size());
    Matrix g = grad_output;
    for (std::size_t i = layers_.size(); i-- > 0;)
        g = layers_[i]->backward(caches[i], g, per_layer[i]);
    std::vector<Matrix> flat;
    for (auto& pg : per_layer)
        for (auto& m : pg) flat.push_back(std::move(m));
    return flat;
}

std::vector<Matrix*> Network::parameters() {
    std::vector<Matrix*> p;
    for (auto& l : layers_)
        for (Matrix* m : l->parameters()) p.push_back(m);
    return p;
}

std::vector<const Matrix*> Network::parameters() const {
    std::vector<const Matrix*> p;
    for (const auto& l : layers_)
        for (const Matrix* m : l->parameters()) p.push_back(m);
    return p;
}

std::vector<std::string> Network::parameter_names() const {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < layers_.size(); ++i)
        for (const std::string& n : layers_[i]->parameter_names())
            names.push_back("layer" + std::to_string(i) + "." + n);
    return names;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const Matrix* m : parameters()) n += m->size();
    return n;
}

void Network::copy_parameters_from(const Network& o) {
    auto dst = parameters();
    auto src = o.parameters();
    check(dst.size() == src.size(), "copy_parameters_from: structure mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) {
        check(dst[i]->rows() == src[i]->rows() && dst[i]->cols() == src[i]->cols(),
              "copy_parameters_from: shape mismatch");
        *dst[i] = *src[i];
    }
}

namespace {

Matrix sample_uniform(std::size_t rows, std::size_t cols, double bound, Rng& rng) {
    Matrix m(rows, cols);
    for (double& v : m.raw()) v = rng.uniform(-bound, bound);
    return m;
}

}  // namespace

Network init_network(const NetworkSpec& spec, Rng& rng) {
    check(spec.input_dim > 0, "init_network: zero input dim");
    check(!spec.layers.empty(), "init_network: no layers");
    std::vector<std::unique_ptr<Layer>> layers;
    std::size_t in = spec.input_dim;
    for (const LayerSpec& ls : spec.layers) {
        check(ls.width > 0, "init_network: zero-width layer");
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        if (ls.kind == LayerSpec::Kind::Dense) {
            layers.push_back(std::make_unique<DenseLayer>(
                sample_uniform(ls.width, in, bound, rng),
                sample_uniform(1, ls.width, bound, rng), ls.activation, ls.layer_norm));
        } else {
            Matrix w1 = sample_uniform(ls.width, in, bound, rng);
            Matrix b1 = sample_uniform(1, ls.width, bound, rng);
            Matrix w2 = sample_uniform(ls.width, in, bound, rng);
            Matrix b2 = sample_uniform(1, ls.width, bound, rng);
            layers.push_back(std::make_unique<HrLayer>(std::move(w1), std::move(b1),
                                                       std::move(w2), std::move(b2),
                                                       ls.activation, ls.layer_norm));
        }
        in = ls.width;
    }
    return Network(std::move(layers));
}

}  // namespace hrlab
