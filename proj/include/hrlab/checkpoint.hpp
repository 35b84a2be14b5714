#pragma once

#include <string>

#include "hrlab/network.hpp"

namespace hrlab {

/// Text checkpoint, version 1. Header line "HRCK 1", then one block per
/// tensor: name line, "rows cols" line, row-major values one per line at 17
/// significant digits. Each layer additionally carries a "layerK.meta" block
/// (1x3: kind, activation, layer_norm) so the architecture round-trips.
void save_checkpoint(const Network& net, const std::string& path);

/// Throws std::runtime_error naming the offending block on malformed input;
/// never returns a partial network.
Network load_checkpoint(const std::string& path);

}  // namespace hrlab
