#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "recipe.hpp"
#include "stabflow/integrators.hpp"

namespace stabflow {

namespace detail {

Recipe rkc_recipe(const RkcTableau& tab) {
  Recipe r;
  const int s = tab.s;
  r.stages.resize(s);
  r.stages[0].terms = {{0, tab.kappa[1]}};
  for (int j = 2; j <= s; ++j) {
    StageSpec& st = r.stages[j - 1];
    st.alpha = tab.mu[j];
    st.beta = tab.nu[j];
    st.terms = {{j - 1, tab.kappa[j]}, {0, -tab.a[j - 1] * tab.kappa[j]}};
  }
  r.node.assign(s + 1, 0.0);
  for (int j = 0; j <= s; ++j) r.node[j] = tab.c.empty() ? 0.0 : tab.c[j + 1];
  return r;
}

Recipe rock2_recipe(const Rock2Tableau& tab) {
  Recipe r;
  const int s = tab.s;
  r.stages.resize(s);
  r.stages[0].terms = {{0, tab.mu[1]}};
  for (int j = 2; j <= s - 2; ++j) {
    StageSpec& st = r.stages[j - 1];
    st.alpha = -tab.nu[j];
    st.beta = -tab.kappa[j];
    st.terms = {{j - 1, tab.mu[j]}};
  }
  const double sig = tab.sigma, tau = tab.tau;
  r.stages[s - 2].alpha = 1.0;
  r.stages[s - 2].terms = {{s - 2, sig}};
  r.stages[s - 1].alpha = 1.0;
  r.stages[s - 1].terms = {{s - 1, tau / sig}, {s - 2, sig - tau / sig}};
  r.node.assign(s + 1, 0.0);
  for (int j = 0; j <= s; ++j) r.node[j] = tab.c.empty() ? 0.0 : tab.c[j + 1];
  return r;
}

ButcherForm symbolic_butcher(const Recipe& r) {
  const int s = static_cast<int>(r.stages.size());
  const int width = s + 1;
  std::vector<std::vector<double>> g(s + 1, std::vector<double>(width, 0.0));
  for (int j = 1; j <= s; ++j) {
    const StageSpec& st = r.stages[j - 1];
    auto& row = g[j];
    for (int k = 0; k < width; ++k) {
      double v = st.alpha * g[j - 1][k];
      if (j >= 2) v += st.beta * g[j - 2][k];
      row[k] = v;
    }
    for (const auto& term : st.terms) row[term.index] += term.coef;
  }
  ButcherForm bf;
  bf.stages = s + 1;
  bf.a = std::move(g);
  return bf;
}

}  // namespace detail

std::vector<double> ButcherForm::c() const {
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& row : a) {
    double s = 0.0;
    for (double x : row) s += x;
    out.push_back(s);
  }
  return out;
}

RkcTableau rkc_tableau(int s, double eps) {
  if (s < 2) throw std::invalid_argument("RKC needs s >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("RKC damping must be positive");
  RkcTableau t;
  t.s = s;
  t.eps = eps;
  t.w0 = 1.0 + eps / (static_cast<double>(s) * s);
  const double w0 = t.w0;
  t.T.assign(s + 1, 0.0);
  t.dT.assign(s + 1, 0.0);
  t.ddT.assign(s + 1, 0.0);
  t.T[0] = 1.0;
  t.T[1] = w0;
  t.dT[1] = 1.0;
  for (int j = 2; j <= s; ++j) {
    t.T[j] = 2.0 * w0 * t.T[j - 1] - t.T[j - 2];
    t.dT[j] = 2.0 * t.T[j - 1] + 2.0 * w0 * t.dT[j - 1] - t.dT[j - 2];
    t.ddT[j] = 4.0 * t.dT[j - 1] + 2.0 * w0 * t.ddT[j - 1] - t.ddT[j - 2];
  }
  t.w1 = t.dT[s] / t.ddT[s];
  t.b.assign(s + 1, 0.0);
  t.a.assign(s + 1, 0.0);
  for (int j = 2; j <= s; ++j) t.b[j] = t.ddT[j] / (t.dT[j] * t.dT[j]);
  t.b[0] = t.b[1] = t.b[2];
  for (int j = 0; j <= s; ++j) t.a[j] = 1.0 - t.b[j] * t.T[j];
  t.mu.assign(s + 1, 0.0);
  t.nu.assign(s + 1, 0.0);
  t.kappa.assign(s + 1, 0.0);
  t.kappa[1] = t.b[1] * t.w1;
  for (int j = 2; j <= s; ++j) {
    t.mu[j] = 2.0 * t.b[j] * w0 / t.b[j - 1];
    t.nu[j] = -t.b[j] / t.b[j - 2];
    t.kappa[j] = 2.0 * t.b[j] * t.w1 / t.b[j - 1];
  }
  const auto bf = detail::symbolic_butcher(detail::rkc_recipe(t));
  t.c.assign(1, 0.0);
  for (double ci : bf.c()) t.c.push_back(ci);
  return t;
}

ButcherForm butcher_form(const RkcTableau& tab) { return detail::symbolic_butcher(detail::rkc_recipe(tab)); }
ButcherForm butcher_form(const Rock2Tableau& tab) { return detail::symbolic_butcher(detail::rock2_recipe(tab)); }

namespace {

void check_order(const ButcherForm& bf, int s) {
  const auto b = bf.b();
  const auto c = bf.c();
  double sb = 0.0, sbc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    sb += b[i];
    sbc += b[i] * c[i];
  }
  if (std::abs(sb - 1.0) > 1e-10 || std::abs(sbc - 0.5) > 1e-10) {
    std::ostringstream os;
    os << "ROCK2 coefficients for s=" << s << " violate the order conditions (sum b = " << sb
       << ", sum b c = " << sbc << ")";
    throw std::runtime_error(os.str());
  }
}

}  // namespace

Rock2Table Rock2Table::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ROCK2 coefficient table: " + path);
  Rock2Table table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Rock2Tableau t;
    ls >> t.s >> t.degree;
    const int m = t.degree;
    if (!ls || t.s < 3 || m < t.s - 2)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed record header");
    t.mu.assign(m + 1, 0.0);
    t.nu.assign(m + 1, 0.0);
    t.kappa.assign(m + 1, 0.0);
    for (int j = 1; j <= m; ++j) ls >> t.mu[j];
    for (int j = 2; j <= m; ++j) ls >> t.nu[j];
    for (int j = 2; j <= m; ++j) ls >> t.kappa[j];
    ls >> t.sigma >> t.tau;
    if (!ls) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": truncated record");
    const auto bf = butcher_form(t);
    check_order(bf, t.s);
    t.c.assign(1, 0.0);
    for (double ci : bf.c()) t.c.push_back(ci);
    table.entries_[t.s] = std::move(t);
  }
  if (table.entries_.empty()) throw std::runtime_error("ROCK2 coefficient table is empty: " + path);
  return table;
}

std::string Rock2Table::default_path() {
  if (const char* env = std::getenv("STABFLOW_ROCK2_TABLE"); env && *env) return env;
#ifdef STABFLOW_ROCK2_TABLE_INSTALLED
  if (std::filesystem::exists(STABFLOW_ROCK2_TABLE_INSTALLED)) return STABFLOW_ROCK2_TABLE_INSTALLED;
#endif
#ifdef STABFLOW_ROCK2_TABLE_SOURCE
  return STABFLOW_ROCK2_TABLE_SOURCE;
#else
  return "rock2_coefficients.txt";
#endif
}

const Rock2Table& Rock2Table::cached(const std::string& path) {
  static std::mutex mtx;
  static std::map<std::string, Rock2Table> cache;
  std::lock_guard lock(mtx);
  auto it = cache.find(path);
  if (it == cache.end()) it = cache.emplace(path, load(path)).first;
  return it->second;
}

const Rock2Table& Rock2Table::default_table() { return cached(default_path()); }

const Rock2Tableau& Rock2Table::get(int s) const {
  auto it = entries_.find(s);
  if (it != entries_.end()) return it->second;
  std::ostringstream os;
  os << "ROCK2 degree s=" << s << " is not in the table; nearest available:";
  auto hi = entries_.lower_bound(s);
  if (hi != entries_.begin()) os << ' ' << std::prev(hi)->first;
  if (hi != entries_.end()) os << ' ' << hi->first;
  throw std::out_of_range(os.str());
}

std::vector<int> Rock2Table::degrees() const {
  std::vector<int> d;
  for (const auto& [s, _] : entries_) d.push_back(s);
  return d;
}

std::vector<double> nodes_c(Method method, int s, const Rock2Table* table, double eps) {
  ButcherForm bf;
  if (method == Method::rkc) {
    bf = butcher_form(rkc_tableau(s, eps));
  } else if (method == Method::rock2 || method == Method::pirock) {
    const Rock2Table& tb = table ? *table : Rock2Table::default_table();
    bf = butcher_form(tb.get(s));
  } else {
    throw std::invalid_argument("nodes_c is defined for RKC and ROCK2 only");
  }
  return bf.c();
}

double stability_length(Method method, int s) {
  const double s2 = static_cast<double>(s) * s;
  return method == Method::rkc ? 0.653 * s2 : 0.811 * s2;
}

int select_stages(double dt, double rho, Method method, int min_stages, int cap, const Rock2Table* table) {
  const int method_min = (method == Method::rkc) ? 2 : 3;
  int s = std::max(min_stages, method_min);
  const double need = dt * rho;
  const double l = (method == Method::rkc) ? 0.653 : 0.811;
  const double guess = std::sqrt(std::max(need, 0.0) / l);
  s = std::max(s, static_cast<int>(std::ceil(guess - 1e-9)));
  if (method != Method::rkc) {
    const Rock2Table& tb = table ? *table : Rock2Table::default_table();
    while (s <= cap && !tb.has(s)) ++s;
  }
  if (s > cap) {
    std::ostringstream os;
    os << "required stage count " << s << " exceeds the cap " << cap << " (dt*rho = " << need << ")";
    throw std::runtime_error(os.str());
  }
  return s;
}

}  // namespace stabflow
