#include "hrlab/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace hrlab {

namespace {
constexpr double kLnEps = 1e-5;
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
    }
    return "?";
}

Activation activation_from_name(const std::string& s) {
    if (s == "identity") return Activation::Identity;
    if (s == "tanh") return Activation::Tanh;
    if (s == "relu") return Activation::Relu;
    throw std::invalid_argument("unknown activation: " + s);
}

double activate(Activation a, double x) {
    switch (a) {
        case Activation::Identity: return x;
        case Activation::Tanh: return std::tanh(x);
        case Activation::Relu: return x > 0.0 ? x : 0.0;
    }
    return x;
}

Matrix activation_apply(Activation a, const Matrix& pre) {
    Matrix out = pre;
    if (a == Activation::Identity) return out;
    for (double& v : out.raw()) v = activate(a, v);
    return out;
}

namespace {

// Derivative of f at pre-activation v, given a = f(v). The ReLU subgradient
// at exactly 0 is taken as 0.
inline double act_deriv(Activation act, double v, double a) {
    switch (act) {
        case Activation::Identity: return 1.0;
        case Activation::Tanh: return 1.0 - a * a;
        case Activation::Relu: return v > 0.0 ? 1.0 : 0.0;
    }
    return 1.0;
}

// v = g * (u - mu) * istd + o, rowwise over features.
void layer_norm_forward(const Matrix& u, const Matrix& gain, const Matrix& offset,
                        Matrix& v, std::vector<double>& mu, std::vector<double>& istd) {
    const std::size_t n = u.cols();
    v = Matrix(u.rows(), n);
    mu.resize(u.rows());
    istd.resize(u.rows());
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const double* ur = u.row_ptr(i);
        double m = 0.0;
        for (std::size_t j = 0; j < n; ++j) m += ur[j];
        m /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t j = 0; j < n; ++j) var += (ur[j] - m) * (ur[j] - m);
        var /= static_cast<double>(n);
        const double is = 1.0 / std::sqrt(var + kLnEps);
        mu[i] = m;
        istd[i] = is;
        double* vr = v.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j)
            vr[j] = gain(0, j) * (ur[j] - m) * is + offset(0, j);
    }
}

// Given dL/dv, produces dL/du and accumulates gain/offset gradients.
Matrix layer_norm_backward(const Matrix& u, const Matrix& gain,
                           const std::vector<double>& mu, const std::vector<double>& istd,
                           const Matrix& dv, Matrix& dgain, Matrix& doffset) {
    const std::size_t n = u.cols();
    Matrix du(u.rows(), n);
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const double* ur = u.row_ptr(i);
        const double* dvr = dv.row_ptr(i);
        const double is = istd[i];
        double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double xhat = (ur[j] - mu[i]) * is;
            const double dxhat = dvr[j] * gain(0, j);
            dgain(0, j) += dvr[j] * xhat;
            doffset(0, j) += dvr[j];
            mean_dxhat += dxhat;
            mean_dxhat_xhat += dxhat * xhat;
        }
        mean_dxhat /= static_cast<double>(n);
        mean_dxhat_xhat /= static_cast<double>(n);
        double* dur = du.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double xhat = (ur[j] - mu[i]) * is;
            const double dxhat = dvr[j] * gain(0, j);
            dur[j] = is * (dxhat - mean_dxhat - xhat * mean_dxhat_xhat);
        }
    }
    return du;
}

// One affine+LN+activation branch. Shared between DenseLayer and HrLayer.
void branch_forward(const Matrix& x, const Matrix& w, const Matrix& b, Activation act,
                    bool ln, const Matrix& gain, const Matrix& offset, Matrix& u,
                    Matrix& v, Matrix& a, std::vector<double>& mu,
                    std::vector<double>& istd) {
    u = matmul_bt(x, w);
    add_row_inplace(u, b);
    if (ln) {
        layer_norm_forward(u, gain, offset, v, mu, istd);
    } else {
        v = u;
        mu.clear();
        istd.clear();
    }
    a = activation_apply(act, v);
}

// da: dL/da for the branch. Appends dW, db (and LN grads handled by caller)
// and returns the input gradient contribution da -> dx.
Matrix branch_backward(const Matrix& x, const Matrix& w, Activation act, bool ln,
                       const Matrix& gain, const Matrix& u, const Matrix& v,
                       const Matrix& a, const std::vector<double>& mu,
                       const std::vector<double>& istd, const Matrix& da, Matrix& dw,
                       Matrix& db, Matrix& dgain, Matrix& doffset) {
    Matrix dv = da;
    for (std::size_t i = 0; i < dv.rows(); ++i)
        for (std::size_t j = 0; j < dv.cols(); ++j)
            dv(i, j) *= act_deriv(act, v(i, j), a(i, j));
    Matrix du = ln ? layer_norm_backward(u, gain, mu, istd, dv, dgain, doffset)
                   : std::move(dv);
    dw = matmul_at(du, x);
    db = column_sums(du);
    return matmul(du, w);
}

}  // namespace

DenseLayer::DenseLayer(Matrix weights, Matrix bias, Activation act, bool layer_norm)
    : weights_(std::move(weights)),
      bias_(std::move(bias)),
      activation_(act),
      layer_norm_(layer_norm) {
    check(bias_.rows() == 1 && bias_.cols() == weights_.rows(),
          "DenseLayer: bias length must equal weight rows");
    check(weights_.rows() > 0 && weights_.cols() > 0, "DenseLayer: zero dimension");
    if (layer_norm_) {
        ln_gain_ = Matrix(1, weights_.rows(), 1.0);
        ln_offset_ = Matrix(1, weights_.rows(), 0.0);
    }
}

Matrix DenseLayer::forward(const Matrix& x, LayerCache& cache) const {
    check(x.cols() == in_dim(), "DenseLayer::forward: input dim mismatch");
    cache.input = x;
    branch_forward(x, weights_, bias_, activation_, layer_norm_, ln_gain_, ln_offset_,
                   cache.u1, cache.v1, cache.a1, cache.mu1, cache.istd1);
    cache.output = cache.a1;
    return cache.output;
}

Matrix DenseLayer::backward(const LayerCache& cache, const Matrix& grad_out,
                            std::vector<Matrix>& param_grads) const {
    if (cache.input.cols() != in_dim() || cache.a1.cols() != out_dim())
        throw std::logic_error("DenseLayer::backward: cache does not match layer");
    check(grad_out.rows() == cache.input.rows() && grad_out.cols() == out_dim(),
          "DenseLayer::backward: gradient shape mismatch");
    Matrix dw, db;
    Matrix dgain(1, out_dim()), doffset(1, out_dim());
    Matrix dx = branch_backward(cache.input, weights_, activation_, layer_norm_,
                                ln_gain_, cache.u1, cache.v1, cache.a1, cache.mu1,
                                cache.istd1, grad_out, dw, db, dgain, doffset);
    param_grads.push_back(std::move(dw));
    param_grads.push_back(std::move(db));
    if (layer_norm_) {
        param_grads.push_back(std::move(dgain));
        param_grads.push_back(std::move(doffset));
    }
    return dx;
}

std::vector<Matrix*> DenseLayer::parameters() {
    std::vector<Matrix*> p{&weights_, &bias_};
    if (layer_norm_) {
        p.push_back(&ln_gain_);
        p.push_back(&ln_offset_);
    }
    return p;
}

std::vector<const Matrix*> DenseLayer::parameters() const {
    std::vector<const Matrix*> p{&weights_, &bias_};
    if (layer_norm_) {
        p.push_back(&ln_gain_);
        p.push_back(&ln_offset_);
    }
    return p;
}

std::vector<std::string> DenseLayer::parameter_names() const {
    std::vector<std::string> n{"A", "b"};
    if (layer_norm_) {
        n.push_back("ln.g");
        n.push_back("ln.o");
    }
    return n;
}

std::unique_ptr<Layer> DenseLayer::clone() const {
    return std::make_unique<DenseLayer>(*this);
}

HrLayer::HrLayer(Matrix w1, Matrix b1, Matrix w2, Matrix b2, Activation act,
                 bool layer_norm)
    : w1_(std::move(w1)),
      b1_(std::move(b1)),
      w2_(std::move(w2)),
      b2_(std::move(b2)),
      activation_(act),
      layer_norm_(layer_norm) {
    check(act != Activation::Identity, "HrLayer: activation must be tanh or relu");
    check(w1_.rows() == w2_.rows() && w1_.cols() == w2_.cols(),
          "HrLayer: branch shapes must match");
    check(b1_.rows() == 1 && b1_.cols() == w1_.rows() && b2_.rows() == 1 &&
              b2_.cols() == w2_.rows(),
          "HrLayer: bias length must equal weight rows");
    check(w1_.rows() > 0 && w1_.cols() > 0, "HrLayer: zero dimension");
    if (layer_norm_) {
        ln_gain1_ = Matrix(1, w1_.rows(), 1.0);
        ln_offset1_ = Matrix(1, w1_.rows(), 0.0);
        ln_gain2_ = Matrix(1, w1_.rows(), 1.0);
        ln_offset2_ = Matrix(1, w1_.rows(), 0.0);
    }
}

Matrix HrLayer::forward(const Matrix& x, LayerCache& cache) const {
    check(x.cols() == in_dim(), "HrLayer::forward: input dim mismatch");
    cache.input = x;
    branch_forward(x, w1_, b1_, activation_, layer_norm_, ln_gain1_, ln_offset1_,
                   cache.u1, cache.v1, cache.a1, cache.mu1, cache.istd1);
    branch_forward(x, w2_, b2_, activation_, layer_norm_, ln_gain2_, ln_offset2_,
                   cache.u2, cache.v2, cache.a2, cache.mu2, cache.istd2);
    Matrix z(cache.a1.rows(), cache.a1.cols());
    for (std::size_t i = 0; i < z.size(); ++i)
        z.raw()[i] = cache.a1.raw()[i] * cache.a2.raw()[i];
    cache.output = z;
    return cache.output;
}

Matrix HrLayer::backward(const LayerCache& cache, const Matrix& grad_out,
                         std::vector<Matrix>& param_grads) const {
    if (cache.input.cols() != in_dim() || cache.a1.cols() != out_dim() ||
        cache.a2.cols() != out_dim() || cache.a2.rows() != cache.a1.rows())
        throw std::logic_error("HrLayer::backward: cache does not match layer");
    check(grad_out.rows() == cache.input.rows() && grad_out.cols() == out_dim(),
          "HrLayer::backward: gradient shape mismatch");

    // Product rule: dL/da1 = g (.) a2, dL/da2 = g (.) a1.
    Matrix da1 = grad_out;
    Matrix da2 = grad_out;
    for (std::size_t i = 0; i < da1.size(); ++i) {
        da1.raw()[i] *= cache.a2.raw()[i];
        da2.raw()[i] *= cache.a1.raw()[i];
    }

    Matrix dw1, db1, dw2, db2;
    Matrix dg1(1, out_dim()), do1(1, out_dim()), dg2(1, out_dim()), do2(1, out_dim());
    Matrix dx = branch_backward(cache.input, w1_, activation_, layer_norm_, ln_gain1_,
                                cache.u1, cache.v1, cache.a1, cache.mu1, cache.istd1,
                                da1, dw1, db1, dg1, do1);
    Matrix dx2 = branch_backward(cache.input, w2_, activation_, layer_norm_, ln_gain2_,
                                 cache.u2, cache.v2, cache.a2, cache.mu2, cache.istd2,
                                 da2, dw2, db2, dg2, do2);
    for (std::size_t i = 0; i < dx.size(); ++i) dx.raw()[i] += dx2.raw()[i];

    param_grads.push_back(std::move(dw1));
    param_grads.push_back(std::move(db1));
    param_grads.push_back(std::move(dw2));
    param_grads.push_back(std::move(db2));
    if (layer_norm_) {
        param_grads.push_back(std::move(dg1));
        param_grads.push_back(std::move(do1));
        param_grads.push_back(std::move(dg2));
        param_grads.push_back(std::move(do2));
    }
    return dx;
}

std::vector<Matrix*> HrLayer::parameters() {
    std::vector<Matrix*> p{&w1_, &b1_, &w2_, &b2_};
    if (layer_norm_) {
        p.push_back(&ln_gain1_);
        p.push_back(&ln_offset1_);
        p.push_back(&ln_gain2_);
        p.push_back(&ln_offset2_);
    }
    return p;
}

std::vector<const Matrix*> HrLayer::parameters() const {
    std::vector<const Matrix*> p{&w1_, &b1_, &w2_, &b2_};
    if (layer_norm_) {
        p.push_back(&ln_gain1_);
        p.push_back(&ln_offset1_);
        p.push_back(&ln_gain2_);
        p.push_back(&ln_offset2_);
    }
    return p;
}

std::vector<std::string> HrLayer::parameter_names() const {
    std::vector<std::string> n{"branch1.A", "branch1.b", "branch2.A", "branch2.b"};
    if (layer_norm_) {
        n.push_back("branch1.ln.g");
        n.push_back("branch1.ln.o");
        n.push_back("branch2.ln.g");
        n.push_back("branch2.ln.o");
    }
    return n;
}

std::unique_ptr<Layer> HrLayer::clone() const {
    return std::make_unique<HrLayer>(*this);
}

}  // namespace hrlab
