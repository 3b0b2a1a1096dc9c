#pragma once

#include <string>

#include "sbmh/model.hpp"

namespace sbmh {

/// JSON config: {"n": 100, "m": 2, "p": [0.5, 0.3], "q": 0.1,
/// "allow_loops": true, "seed": 7}. allow_loops and seed are optional; a
/// scalar p applies to every block.
/// Unknown keys and wrongly typed values are rejected with ValidationError.
BlockModelConfig parse_config(const std::string& text);
BlockModelConfig load_config(const std::string& path);
std::string dump_config(const BlockModelConfig& config);

}  // namespace sbmh
