#include "stabflow/output.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stabflow/simulation.hpp"

namespace stabflow {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

void CsvTable::sort_rows() { std::stable_sort(rows_.begin(), rows_.end()); }

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << cells[k];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CsvTable::write(const std::string& path) const {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << str();
}

void write_summary(const std::string& path, const RunConfig& cfg, const RunReport& rep) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  auto kv = [&out](const std::string& k, const std::string& v) { out << k << '=' << v << '\n'; };
  kv("problem", cfg.problem);
  kv("re", format_number(cfg.re));
  kv("nx", std::to_string(cfg.N));
  kv("integrator", to_string(cfg.integrator));
  kv("coupling", to_string(cfg.coupling));
  kv("pressure", to_string(cfg.pressure));
  kv("cp", std::to_string(cfg.cp));
  kv("adaptive", cfg.adaptive ? "1" : "0");
  kv("dt", format_number(cfg.dt));
  if (cfg.adaptive) {
    kv("atol", format_number(cfg.atol));
    kv("rtol", format_number(cfg.rtol));
  }
  kv("t_end", format_number(cfg.t_end));
  kv("t_final", format_number(rep.t_final));
  kv("unstable", rep.unstable ? "1" : "0");
  if (rep.unstable) kv("blowup_time", format_number(rep.blowup_time));
  if (!rep.failure.empty()) kv("failure", rep.failure);
  kv("steps_accepted", std::to_string(rep.steps_accepted));
  kv("steps_rejected", std::to_string(rep.steps_rejected));
  kv("steps_attempted", std::to_string(rep.steps_attempted));
  kv("total_stages", std::to_string(rep.total_stages));
  kv("avg_stages", format_number(rep.avg_stages()));
  kv("min_stages", std::to_string(rep.min_stages));
  kv("max_stages", std::to_string(rep.max_stages));
  kv("f_evals", std::to_string(rep.f_evals));
  kv("poisson_solves", std::to_string(rep.poisson_solves));
  kv("max_divergence", format_number(rep.max_divergence));
  if (rep.has_exact) {
    kv("err_u", format_number(rep.err_u));
    kv("err_p", format_number(rep.err_p));
  }
  kv("wall_seconds", format_number(rep.wall_seconds));
}

}  // namespace stabflow
