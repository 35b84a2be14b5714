#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hrlab/adam.hpp"
#include "hrlab/checkpoint.hpp"
#include "hrlab/network.hpp"
#include "oracles.hpp"

using namespace hrlab;

namespace {

Matrix scalar(double v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
}

// 1-neuron HR layer with pre-activations (p1, p2) when fed x = [1].
HrLayer one_neuron_hr(double p1, double p2, Activation act) {
    return HrLayer(scalar(p1), Matrix(1, 1), scalar(p2), Matrix(1, 1), act);
}

}  // namespace

TEST_CASE("activation basics") {
    CHECK(activate(Activation::Tanh, 0.0) == 0.0);
    CHECK(activate(Activation::Relu, -3.2) == 0.0);
    for (double x : {-2.0, -1.0, 1.0, 2.0}) {
        const double ref = (std::exp(x) - std::exp(-x)) / (std::exp(x) + std::exp(-x));
        CHECK(std::abs(activate(Activation::Tanh, x) - ref) < 1e-12);
    }
    Matrix pre(1, 3);
    pre(0, 0) = -1.0;
    pre(0, 1) = 0.0;
    pre(0, 2) = 2.5;
    const Matrix relu = activation_apply(Activation::Relu, pre);
    CHECK(relu(0, 0) == 0.0);
    CHECK(relu(0, 1) == 0.0);
    CHECK(relu(0, 2) == 2.5);
}

TEST_CASE("hr forward: zero-weight tanh product is the zero vector") {
    HrLayer layer(Matrix(4, 3), Matrix(1, 4), Matrix(4, 3), Matrix(1, 4),
                  Activation::Tanh);
    Matrix x(1, 3);
    x(0, 0) = 0.3;
    x(0, 1) = -2.0;
    x(0, 2) = 5.0;
    LayerCache cache;
    const Matrix z = layer.forward(x, cache);
    for (std::size_t j = 0; j < 4; ++j) CHECK(z(0, j) == 0.0);
}

TEST_CASE("hr forward: relu branches 2 and 3 multiply to 6") {
    HrLayer layer = one_neuron_hr(2.0, 3.0, Activation::Relu);
    LayerCache cache;
    CHECK(layer.forward(scalar(1.0), cache)(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("hr forward: tanh(1) * tanh(-1) is -tanh(1)^2") {
    HrLayer layer = one_neuron_hr(1.0, -1.0, Activation::Tanh);
    LayerCache cache;
    const double z = layer.forward(scalar(1.0), cache)(0, 0);
    CHECK(z == doctest::Approx(-std::tanh(1.0) * std::tanh(1.0)).epsilon(1e-12));
    CHECK(z == doctest::Approx(-0.580026).epsilon(1e-5));
}

TEST_CASE("hr backward: both branches saturated kills every parameter gradient") {
    HrLayer layer = one_neuron_hr(20.0, -20.0, Activation::Tanh);
    LayerCache cache;
    layer.forward(scalar(1.0), cache);
    std::vector<Matrix> grads;
    layer.backward(cache, scalar(1.0), grads);
    REQUIRE(grads.size() == 4);
    for (const Matrix& g : grads)
        for (double v : g.raw()) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("hr backward: saturated branch1 leaves branch2's gradient path alive") {
    // u1 = 20 (saturated), u2 = 0: dz/dw2 = tanh(20) * sech^2(0) * x = x.
    HrLayer layer = one_neuron_hr(20.0, 0.0, Activation::Tanh);
    LayerCache cache;
    layer.forward(scalar(1.0), cache);
    std::vector<Matrix> grads;
    layer.backward(cache, scalar(1.0), grads);
    CHECK(grads[2](0, 0) == doctest::Approx(std::tanh(20.0)).epsilon(1e-12));
    CHECK(grads[3](0, 0) == doctest::Approx(std::tanh(20.0)).epsilon(1e-12));
    CHECK(std::abs(grads[0](0, 0)) < 1e-8);  // branch1 weight stays dark
}

TEST_CASE("hr backward rejects a cache from a different shape") {
    HrLayer layer = one_neuron_hr(1.0, 1.0, Activation::Tanh);
    HrLayer other(Matrix(2, 3), Matrix(1, 2), Matrix(2, 3), Matrix(1, 2),
                  Activation::Tanh);
    LayerCache cache;
    Matrix x(1, 3, 0.5);
    other.forward(x, cache);
    std::vector<Matrix> grads;
    CHECK_THROWS_AS(layer.backward(cache, scalar(1.0), grads), std::logic_error);
}

TEST_CASE("analytic gradients match finite differences for every layer kind") {
    Rng rng(2024);
    int configs = 0;
    for (Activation act : {Activation::Tanh, Activation::Relu}) {
        for (bool hr : {false, true}) {
            for (bool ln : {false, true}) {
                for (int rep = 0; rep < 3; ++rep) {
                    NetworkSpec spec;
                    spec.input_dim = 5;
                    spec.layers = {{hr ? LayerSpec::Kind::Hr : LayerSpec::Kind::Dense,
                                    6, act, ln},
                                   {LayerSpec::Kind::Dense, 2, Activation::Identity,
                                    false}};
                    Network net = init_network(spec, rng);
                    const Matrix x = oracle::random_matrix(4, 5, rng, 0.8);
                    const Matrix w = oracle::random_matrix(4, 2, rng);
                    const auto res = oracle::finite_difference_check(net, x, w);
                    CHECK(res.max_rel_error < 1e-6);
                    ++configs;
                }
            }
        }
    }
    CHECK(configs == 24);
}

TEST_CASE("identity dense layer with identity weights is a no-op") {
    Network net([] {
        std::vector<std::unique_ptr<Layer>> ls;
        ls.push_back(std::make_unique<DenseLayer>(Matrix::identity(3), Matrix(1, 3),
                                                  Activation::Identity));
        return ls;
    }());
    Rng rng(1);
    const Matrix x = oracle::random_matrix(2, 3, rng);
    const Matrix y = net.forward(x).output;
    CHECK(y == x);
}

TEST_CASE("network forward equals manual layer composition") {
    Rng rng(8);
    NetworkSpec spec;
    spec.input_dim = 4;
    spec.layers = {{LayerSpec::Kind::Hr, 5, Activation::Tanh, false},
                   {LayerSpec::Kind::Dense, 3, Activation::Identity, false}};
    Network net = init_network(spec, rng);
    const Matrix x = oracle::random_matrix(6, 4, rng);
    const ForwardResult fr = net.forward(x);

    LayerCache c1, c2;
    const Matrix z = net.layer(0).forward(x, c1);
    const Matrix y = net.layer(1).forward(z, c2);
    CHECK(fr.output == y);
    REQUIRE(fr.hidden.size() == 1);  // one hidden layer, one record row
    CHECK(fr.hidden[0] == z);
}

TEST_CASE("activation record row count equals hidden layer count") {
    Rng rng(9);
    NetworkSpec spec;
    spec.input_dim = 3;
    spec.layers = {{LayerSpec::Kind::Dense, 4, Activation::Relu, false},
                   {LayerSpec::Kind::Hr, 4, Activation::Relu, false},
                   {LayerSpec::Kind::Hr, 4, Activation::Relu, false},
                   {LayerSpec::Kind::Dense, 2, Activation::Identity, false}};
    Network net = init_network(spec, rng);
    CHECK(net.forward(oracle::random_matrix(2, 3, rng)).hidden.size() == 3);
}

TEST_CASE("adam: zero gradient leaves parameters untouched") {
    Matrix p(2, 2, 1.5);
    AdamOptimizer adam(0.1);
    adam.step({&p}, {Matrix(2, 2)});
    for (double v : p.raw()) CHECK(v == 1.5);
}

TEST_CASE("adam: first step matches the hand-traced recurrence") {
    // g=1, lr=0.1, eps=1e-8: mhat=vhat=1, delta = -0.1/(1+1e-8).
    Matrix p(1, 1);
    AdamOptimizer adam(0.1, 1e-8);
    adam.step({&p}, {Matrix(1, 1, 1.0)});
    CHECK(p(0, 0) == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-12));
    CHECK(p(0, 0) == doctest::Approx(-0.0999999999).epsilon(1e-9));
}

TEST_CASE("adam: moments carry state across steps") {
    // A zero gradient after a nonzero one still moves the parameter, because
    // the first moment has not decayed yet.
    Matrix p(1, 1);
    AdamOptimizer adam(0.1, 1e-8);
    adam.step({&p}, {Matrix(1, 1, 1.0)});
    const double after_first = p(0, 0);
    adam.step({&p}, {Matrix(1, 1, 0.0)});
    CHECK(p(0, 0) != after_first);
    CHECK(p(0, 0) < after_first);
}

TEST_CASE("init_network is seed-deterministic with independent branches") {
    NetworkSpec spec;
    spec.input_dim = 6;
    spec.layers = {{LayerSpec::Kind::Hr, 8, Activation::Tanh, false},
                   {LayerSpec::Kind::Dense, 2, Activation::Identity, false}};
    Rng r1(77), r2(77);
    Network a = init_network(spec, r1);
    Network b = init_network(spec, r2);
    auto pa = a.parameters();
    auto pb = b.parameters();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(*pa[i] == *pb[i]);
    // branch1 != branch2 (independent draws)
    CHECK(!(*pa[0] == *pa[2]));
}

TEST_CASE("init_network weight spread matches uniform fan-in scaling") {
    // U(-1/sqrt(f), 1/sqrt(f)) has std 1/sqrt(3 f).
    NetworkSpec spec;
    spec.input_dim = 100;
    spec.layers = {{LayerSpec::Kind::Dense, 1000, Activation::Tanh, false}};
    Rng rng(5);
    Network net = init_network(spec, rng);
    const Matrix& w = *net.parameters()[0];
    REQUIRE(w.size() == 100000);
    double mean = 0.0;
    for (double v : w.raw()) mean += v;
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (double v : w.raw()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(w.size());
    const double target = 1.0 / std::sqrt(3.0 * 100.0);
    CHECK(std::sqrt(var) > 0.8 * target);
    CHECK(std::sqrt(var) < 1.2 * target);
}

TEST_CASE("init_network rejects zero-width layers") {
    NetworkSpec spec;
    spec.input_dim = 3;
    spec.layers = {{LayerSpec::Kind::Dense, 0, Activation::Tanh, false}};
    Rng rng(1);
    CHECK_THROWS_AS(init_network(spec, rng), std::invalid_argument);
}

TEST_CASE("checkpoint round-trip preserves forward outputs") {
    Rng rng(31);
    NetworkSpec spec;
    spec.input_dim = 7;
    spec.layers = {{LayerSpec::Kind::Dense, 9, Activation::Tanh, true},
                   {LayerSpec::Kind::Hr, 5, Activation::Relu, false},
                   {LayerSpec::Kind::Dense, 2, Activation::Identity, false}};
    Network net = init_network(spec, rng);
    const std::string path = "ckpt_roundtrip.hrck";
    save_checkpoint(net, path);
    const Network loaded = load_checkpoint(path);
    for (int rep = 0; rep < 100; ++rep) {
        const Matrix x = oracle::random_matrix(1, 7, rng);
        const Matrix a = net.forward(x).output;
        const Matrix b = loaded.forward(x).output;
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(std::abs(a.raw()[i] - b.raw()[i]) < 1e-12);
    }
    std::remove(path.c_str());
}

TEST_CASE("truncated checkpoint fails to parse, naming the block") {
    Rng rng(32);
    NetworkSpec spec;
    spec.input_dim = 3;
    spec.layers = {{LayerSpec::Kind::Dense, 4, Activation::Tanh, false},
                   {LayerSpec::Kind::Dense, 2, Activation::Identity, false}};
    Network net = init_network(spec, rng);
    const std::string path = "ckpt_trunc.hrck";
    save_checkpoint(net, path);
    std::ifstream is(path);
    std::string content((std::istreambuf_iterator<char>(is)),
                        std::istreambuf_iterator<char>());
    is.close();
    std::ofstream os(path);
    os << content.substr(0, content.size() / 2);
    os.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(path),
                         doctest::Contains("parse error"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("unsupported checkpoint version is rejected") {
    const std::string path = "ckpt_badver.hrck";
    std::ofstream os(path);
    os << "HRCK 2\n";
    os.close();
    CHECK_THROWS_WITH_AS(load_checkpoint(path),
                         doctest::Contains("unsupported version"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("HR with branch2 frozen at one reproduces the dense layer") {
    // relu(0*x + 1) = 1 exactly, so the product collapses to branch1.
    Rng rng(44);
    const Matrix w = oracle::random_matrix(5, 4, rng);
    const Matrix b = oracle::random_matrix(1, 5, rng);
    HrLayer hr(w, b, Matrix(5, 4), Matrix(1, 5, 1.0), Activation::Relu);
    DenseLayer dense(w, b, Activation::Relu);
    const Matrix x = oracle::random_matrix(8, 4, rng);
    LayerCache ch, cd;
    const Matrix zh = hr.forward(x, ch);
    const Matrix zd = dense.forward(x, cd);
    CHECK(zh == zd);

    const Matrix g = oracle::random_matrix(8, 5, rng);
    std::vector<Matrix> gh, gd;
    hr.backward(ch, g, gh);
    dense.backward(cd, g, gd);
    CHECK(gh[0] == gd[0]);  // branch1 weight grad == dense weight grad
    CHECK(gh[1] == gd[1]);
}

TEST_CASE("HR-tanh output is bounded by the product of two tanh factors") {
    // Strict in exact arithmetic; saturated branches round to exactly 1 in
    // floating point, so the closed interval is the testable property.
    Rng rng(55);
    HrLayer layer(oracle::random_matrix(16, 8, rng, 3.0),
                  oracle::random_matrix(1, 16, rng, 3.0),
                  oracle::random_matrix(16, 8, rng, 3.0),
                  oracle::random_matrix(1, 16, rng, 3.0), Activation::Tanh);
    LayerCache cache;
    const Matrix z = layer.forward(oracle::random_matrix(32, 8, rng, 2.0), cache);
    for (double v : z.raw()) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
}
