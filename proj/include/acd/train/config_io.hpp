#pragma once

#include <string>

#include "acd/algo/hyper_config.hpp"

namespace acd {

/// Plain-text key=value configuration. '#' starts a comment; blank lines
/// are ignored; unknown keys are rejected; parse failures report the line
/// number. An empty file yields all defaults.
HyperConfig config_from_text(const std::string& text, const std::string& origin = "<config>");

HyperConfig config_load(const std::string& path);

/// Serialization with a fixed key order (used in checkpoints and run
/// manifests; round-trips exactly through config_from_text).
std::string config_to_text(const HyperConfig& cfg);

}  // namespace acd
