#include "stabflow/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace stabflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalise_key(std::string k) {
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid number for " + key + ": '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid integer for " + key + ": '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("invalid flag for " + key + ": '" + v + "'");
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = normalise_key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_config(RunConfig& cfg, const ConfigMap& values) {
  for (const auto& [raw_key, v] : values) {
    const auto key = normalise_key(raw_key);
    if (key == "problem") cfg.problem = v;
    else if (key == "re") cfg.re = to_double(key, v);
    else if (key == "nx") cfg.N = to_int(key, v);
    else if (key == "dt") cfg.dt = to_double(key, v);
    else if (key == "adaptive") cfg.adaptive = to_bool(key, v);
    else if (key == "atol") cfg.atol = to_double(key, v);
    else if (key == "rtol") cfg.rtol = to_double(key, v);
    else if (key == "t-end") cfg.t_end = to_double(key, v);
    else if (key == "integrator") cfg.integrator = parse_method(v);
    else if (key == "coupling") cfg.coupling = parse_coupling(v);
    else if (key == "pressure") cfg.pressure = parse_pressure(v);
    else if (key == "cp") cfg.cp = to_int(key, v);
    else if (key == "stages") cfg.stages = to_int(key, v);
    else if (key == "eps") cfg.eps = to_double(key, v);
    else if (key == "advection") cfg.advection = to_bool(key, v);
    else if (key == "out") cfg.out_dir = v;
    else if (key == "rock2-table") cfg.rock2_table = v;
    else throw ConfigError("unknown configuration key '" + raw_key + "'");
  }
}

}  // namespace stabflow
