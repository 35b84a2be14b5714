#include "hrlab/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hrlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::uint64_t u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

}  // namespace

SuiteConfig parse_config_text(const std::string& text) {
    SuiteConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: bad section header at line " +
                                  std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            if (section != "experiment" && section != "train" &&
                section != "diagnostics" && section != "env" && section != "output")
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' at line " +
                              std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        TrainConfig& t = cfg.train;
        if (qual == "experiment.variants") {
            cfg.variants.clear();
            for (const auto& v : split_list(value)) {
                try {
                    cfg.variants.push_back(variant_from_name(v));
                } catch (const std::exception&) {
                    throw ConfigError("config: unknown variant '" + v + "'");
                }
            }
        } else if (qual == "experiment.activations") {
            cfg.activations.clear();
            for (const auto& v : split_list(value)) {
                try {
                    cfg.activations.push_back(activation_from_name(v));
                } catch (const std::exception&) {
                    throw ConfigError("config: unknown activation '" + v + "'");
                }
            }
        } else if (qual == "experiment.seeds") {
            cfg.seeds.clear();
            for (const auto& v : split_list(value))
                cfg.seeds.push_back(parse_u64(qual, v));
        } else if (qual == "experiment.total_steps") {
            t.total_steps = parse_u64(qual, value);
        } else if (qual == "train.hidden_width") {
            t.hidden_width = parse_u64(qual, value);
        } else if (qual == "train.buffer_capacity") {
            t.buffer_capacity = parse_u64(qual, value);
        } else if (qual == "train.batch_size") {
            t.batch_size = parse_u64(qual, value);
        } else if (qual == "train.target_sync_period") {
            t.target_sync_period = parse_u64(qual, value);
        } else if (qual == "train.train_start") {
            t.train_start = parse_u64(qual, value);
        } else if (qual == "train.gamma") {
            t.gamma = parse_double(qual, value);
        } else if (qual == "train.lr") {
            t.lr = parse_double(qual, value);
        } else if (qual == "train.adam_epsilon") {
            t.adam_epsilon = parse_double(qual, value);
        } else if (qual == "train.epsilon_start") {
            t.epsilon_start = parse_double(qual, value);
        } else if (qual == "train.epsilon_end") {
            t.epsilon_end = parse_double(qual, value);
        } else if (qual == "train.epsilon_decay_ratio") {
            t.epsilon_decay_ratio = parse_double(qual, value);
        } else if (qual == "train.with_layernorm") {
            t.with_layernorm = parse_bool(qual, value);
        } else if (qual == "diagnostics.period") {
            t.diagnostics_period = parse_u64(qual, value);
        } else if (qual == "diagnostics.batch") {
            t.diagnostics_batch = parse_u64(qual, value);
        } else if (qual == "diagnostics.omega") {
            t.dormancy_omega = parse_double(qual, value);
        } else if (qual == "diagnostics.jitter_sigma2") {
            t.kde_jitter_sigma2 = parse_double(qual, value);
        } else if (qual == "diagnostics.eval_episodes") {
            t.eval_episodes = parse_u64(qual, value);
        } else if (qual == "env.n_states") {
            t.n_states = parse_u64(qual, value);
        } else if (qual == "env.noise_dim") {
            t.noise_dim = parse_u64(qual, value);
        } else if (qual == "output.dir") {
            cfg.output_dir = value;
        } else {
            throw ConfigError("config: unknown key '" + qual + "'");
        }
    }
    return cfg;
}

SuiteConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

std::string SuiteConfig::canonical_text() const {
    std::vector<std::string> lines;
    std::string variants_s, activations_s, seeds_s;
    for (Variant v : variants) variants_s += std::string(variant_name(v)) + ",";
    for (Activation a : activations) activations_s += std::string(activation_name(a)) + ",";
    for (std::uint64_t s : seeds) seeds_s += std::to_string(s) + ",";
    const TrainConfig& t = train;
    lines = {
        "diagnostics.batch = " + std::to_string(t.diagnostics_batch),
        "diagnostics.eval_episodes = " + std::to_string(t.eval_episodes),
        "diagnostics.jitter_sigma2 = " + fmt(t.kde_jitter_sigma2),
        "diagnostics.omega = " + fmt(t.dormancy_omega),
        "diagnostics.period = " + std::to_string(t.diagnostics_period),
        "env.n_states = " + std::to_string(t.n_states),
        "env.noise_dim = " + std::to_string(t.noise_dim),
        "experiment.activations = " + activations_s,
        "experiment.seeds = " + seeds_s,
        "experiment.total_steps = " + std::to_string(t.total_steps),
        "experiment.variants = " + variants_s,
        "train.adam_epsilon = " + fmt(t.adam_epsilon),
        "train.batch_size = " + std::to_string(t.batch_size),
        "train.buffer_capacity = " + std::to_string(t.buffer_capacity),
        "train.epsilon_decay_ratio = " + fmt(t.epsilon_decay_ratio),
        "train.epsilon_end = " + fmt(t.epsilon_end),
        "train.epsilon_start = " + fmt(t.epsilon_start),
        "train.gamma = " + fmt(t.gamma),
        "train.hidden_width = " + std::to_string(t.hidden_width),
        "train.lr = " + fmt(t.lr),
        "train.target_sync_period = " + std::to_string(t.target_sync_period),
        "train.train_start = " + std::to_string(t.train_start),
        "train.with_layernorm = " + std::string(t.with_layernorm ? "true" : "false"),
    };
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

std::string SuiteConfig::content_hash() const {
    // FNV-1a, 64-bit.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace hrlab
