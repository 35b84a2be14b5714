#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrlab/dqn.hpp"

namespace hrlab {

/// Malformed or unknown configuration; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full experiment-suite configuration: a variant x activation x seed grid on
/// top of a shared training setup.
struct SuiteConfig {
    std::vector<Variant> variants{Variant::Baseline, Variant::Hr};
    std::vector<Activation> activations{Activation::Tanh};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    TrainConfig train;  // seed/variant/activation filled per grid point
    std::string output_dir = "out";

    /// Sorted canonical "section.key = value" lines; hashing this makes the
    /// config hash independent of key order in the file.
    std::string canonical_text() const;
    std::string content_hash() const;  // FNV-1a 64 over canonical_text(), hex
};

/// Strict INI-style parser: "[section]" headers and "key = value" pairs,
/// '#' comments. Unknown sections or keys are errors.
SuiteConfig parse_config_text(const std::string& text);
SuiteConfig load_config(const std::string& path);

}  // namespace hrlab
