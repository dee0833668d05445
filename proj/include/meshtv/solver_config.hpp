#pragma once

#include <optional>
#include <vector>

namespace meshtv {

enum class LinearSolverKind {
  /// Sparse LDL^T up to `direct_solver_max_vertices`, Jacobi-preconditioned CG above.
  Automatic,
  Direct,
  ConjugateGradient,
};

/// Parameters of the L_pTV model and of both solver loops.
struct SolverConfig {
  double lambda = 1.0;
  /// Fidelity exponent in (0,1]; 1 selects the convex L1TV path.
  double p = 0.5;
  /// Weight of the proximal term (rho/2)||u - u^k||^2 in each outer step.
  double prox_weight = 1.0;
  /// Residuals at or below this value are treated as zero when forming the support.
  double eps_support = 1e-3;
  double outer_tol = 1e-6;
  int outer_max_iter = 500;
  /// Convergence also requires the support to be unchanged over this many consecutive steps.
  int support_window = 5;

  /// ADMM penalties; unset means 10 * lambda.
  std::optional<double> beta1;
  std::optional<double> beta2;
  double inner_tol = 1e-6;
  int inner_max_iter = 2000;

  double cg_tol = 1e-10;
  int cg_max_iter = 2000;
  LinearSolverKind linear_solver = LinearSolverKind::Automatic;
  int direct_solver_max_vertices = 50000;

  [[nodiscard]] double effective_beta1() const { return beta1.value_or(10.0 * lambda); }
  [[nodiscard]] double effective_beta2() const { return beta2.value_or(10.0 * lambda); }

  /// Throws InvalidConfig on the first violated constraint.
  void validate() const;
};

/// Fidelity entries kept in the model. Entries are flattened (vertex, channel)
/// pairs, `vertex * channels + channel`, kept sorted.
struct SupportSet {
  std::vector<int> entries;

  [[nodiscard]] std::size_t size() const { return entries.size(); }
  [[nodiscard]] bool empty() const { return entries.empty(); }
  [[nodiscard]] bool contains(int entry) const;
  [[nodiscard]] bool is_subset_of(const SupportSet& other) const;
  /// Vertices with at least one channel in the support.
  [[nodiscard]] std::vector<int> vertices(int channels) const;

  /// Every entry of an image with the given shape.
  static SupportSet all(int vertex_count, int channels);

  friend bool operator==(const SupportSet&, const SupportSet&) = default;
};

}  // namespace meshtv
