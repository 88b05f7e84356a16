// key = value configuration files.
#pragma once

#include <map>
#include <string>

#include "stabflow/simulation.hpp"

namespace stabflow {

using ConfigMap = std::map<std::string, std::string>;

// One `key = value` per line; `#` starts a comment. Throws ConfigError on
// malformed lines.
ConfigMap parse_config(const std::string& text);
ConfigMap load_config(const std::string& path);

// Keys match the long CLI flags without dashes, with '-' or '_' accepted
// (nx, re, dt, adaptive, atol, rtol, t-end, integrator, ...).
void apply_config(RunConfig& cfg, const ConfigMap& values);

}  // namespace stabflow
