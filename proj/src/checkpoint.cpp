#include "hrlab/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hrlab {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_block(std::ostream& os, const std::string& name, const Matrix& m) {
    os << name << "\n" << m.rows() << " " << m.cols() << "\n";
    for (double v : m.raw()) os << format_double(v) << "\n";
}

[[noreturn]] void parse_fail(const std::string& block, const std::string& what) {
    throw std::runtime_error("checkpoint parse error in block '" + block + "': " + what);
}

enum LayerKindCode { kDense = 0, kHr = 1 };
enum ActCode { kIdentity = 0, kTanh = 1, kRelu = 2 };

Matrix meta_for(const Layer& l) {
    Matrix m(1, 3);
    if (const auto* d = dynamic_cast<const DenseLayer*>(&l)) {
        m(0, 0) = kDense;
        m(0, 1) = d->activation() == Activation::Identity ? kIdentity
                  : d->activation() == Activation::Tanh   ? kTanh
                                                          : kRelu;
        m(0, 2) = d->has_layer_norm() ? 1 : 0;
    } else if (const auto* h = dynamic_cast<const HrLayer*>(&l)) {
        m(0, 0) = kHr;
        m(0, 1) = h->activation() == Activation::Tanh ? kTanh : kRelu;
        m(0, 2) = h->has_layer_norm() ? 1 : 0;
    } else {
        throw std::logic_error("checkpoint: unknown layer type");
    }
    return m;
}

}  // namespace

void save_checkpoint(const Network& net, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("checkpoint: cannot open " + tmp);
        os << "HRCK 1\n";
        for (std::size_t i = 0; i < net.layer_count(); ++i)
            write_block(os, "layer" + std::to_string(i) + ".meta",
                        meta_for(net.layer(i)));
        auto params = net.parameters();
        auto names = net.parameter_names();
        for (std::size_t i = 0; i < params.size(); ++i)
            write_block(os, names[i], *params[i]);
        if (!os) throw std::runtime_error("checkpoint: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("checkpoint: rename failed for " + path);
}

Network load_checkpoint(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
    std::string header;
    if (!std::getline(is, header)) parse_fail("<header>", "empty file");
    if (header.rfind("HRCK ", 0) != 0) parse_fail("<header>", "bad magic");
    if (header != "HRCK 1")
        throw std::runtime_error("checkpoint: unsupported version '" +
                                 header.substr(5) + "'");

    std::map<std::string, Matrix> blocks;
    std::vector<std::string> order;
    std::string name;
    while (std::getline(is, name)) {
        if (name.empty()) continue;
        std::string dims;
        if (!std::getline(is, dims)) parse_fail(name, "missing dims line");
        std::istringstream ds(dims);
        std::size_t rows = 0, cols = 0;
        if (!(ds >> rows >> cols) || rows == 0 || cols == 0)
            parse_fail(name, "bad dims '" + dims + "'");
        Matrix m(rows, cols);
        for (std::size_t k = 0; k < m.size(); ++k) {
            std::string line;
            if (!std::getline(is, line)) parse_fail(name, "truncated values");
            std::istringstream vs(line);
            if (!(vs >> m.raw()[k])) parse_fail(name, "bad value '" + line + "'");
        }
        if (blocks.count(name)) parse_fail(name, "duplicate block");
        blocks.emplace(name, std::move(m));
        order.push_back(name);
    }

    std::vector<std::unique_ptr<Layer>> layers;
    for (std::size_t i = 0;; ++i) {
        const std::string prefix = "layer" + std::to_string(i) + ".";
        auto meta_it = blocks.find(prefix + "meta");
        if (meta_it == blocks.end()) break;
        const Matrix& meta = meta_it->second;
        if (meta.rows() != 1 || meta.cols() != 3) parse_fail(prefix + "meta", "bad shape");
        const int kind = static_cast<int>(meta(0, 0));
        const int act_code = static_cast<int>(meta(0, 1));
        const bool ln = meta(0, 2) != 0.0;
        const Activation act = act_code == kIdentity  ? Activation::Identity
                               : act_code == kTanh    ? Activation::Tanh
                               : act_code == kRelu    ? Activation::Relu
                                                      : throw std::runtime_error(
                                                            "checkpoint: bad activation code");
        auto need = [&](const std::string& sub) -> Matrix& {
            auto it = blocks.find(prefix + sub);
            if (it == blocks.end()) parse_fail(prefix + sub, "missing block");
            return it->second;
        };
        std::unique_ptr<Layer> layer;
        if (kind == kDense) {
            layer = std::make_unique<DenseLayer>(need("A"), need("b"), act, ln);
        } else if (kind == kHr) {
            layer = std::make_unique<HrLayer>(need("branch1.A"), need("branch1.b"),
                                              need("branch2.A"), need("branch2.b"),
                                              act, ln);
        } else {
            parse_fail(prefix + "meta", "bad layer kind");
        }
        if (ln) {
            // Overwrite the default LN gain/offset with the stored tensors.
            auto names = layer->parameter_names();
            auto params = layer->parameters();
            for (std::size_t k = 0; k < names.size(); ++k) {
                if (names[k].find("ln.") == std::string::npos) continue;
                Matrix& stored = need(names[k]);
                if (stored.rows() != params[k]->rows() ||
                    stored.cols() != params[k]->cols())
                    parse_fail(prefix + names[k], "shape mismatch");
                *params[k] = stored;
            }
        }
        layers.push_back(std::move(layer));
    }
    if (layers.empty()) parse_fail("layer0.meta", "no layers found");
    return Network(std::move(layers));
}

}  // namespace hrlab
