#include "meshtv/solver_config.hpp"

#include "meshtv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace meshtv {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw InvalidConfig(std::string(name) + " must be positive and finite, got " + std::to_string(value));
}

void require_positive(int value, const char* name) {
  if (value <= 0) throw InvalidConfig(std::string(name) + " must be positive, got " + std::to_string(value));
}

}  // namespace

void SolverConfig::validate() const {
  require_positive(lambda, "lambda");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidConfig("p must lie in (0,1], got " + std::to_string(p));
  require_positive(prox_weight, "prox_weight");
  require_positive(eps_support, "eps_support");
  require_positive(outer_tol, "outer_tol");
  require_positive(outer_max_iter, "outer_max_iter");
  require_positive(support_window, "support_window");
  require_positive(effective_beta1(), "beta1");
  require_positive(effective_beta2(), "beta2");
  require_positive(inner_tol, "inner_tol");
  require_positive(inner_max_iter, "inner_max_iter");
  require_positive(cg_tol, "cg_tol");
  require_positive(cg_max_iter, "cg_max_iter");
  require_positive(direct_solver_max_vertices, "direct_solver_max_vertices");
}

bool SupportSet::contains(int entry) const {
  return std::binary_search(entries.begin(), entries.end(), entry);
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
  return std::includes(other.entries.begin(), other.entries.end(), entries.begin(), entries.end());
}

std::vector<int> SupportSet::vertices(int channels) const {
  std::vector<int> out;
  for (int e : entries) {
    const int v = e / channels;
    if (out.empty() || out.back() != v) out.push_back(v);
  }
  return out;
}

SupportSet SupportSet::all(int vertex_count, int channels) {
  SupportSet s;
  s.entries.resize(static_cast<std::size_t>(vertex_count) * channels);
  std::iota(s.entries.begin(), s.entries.end(), 0);
  return s;
}

}  // namespace meshtv
