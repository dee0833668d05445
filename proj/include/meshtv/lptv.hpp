#pragma once

#include "meshtv/diffops.hpp"
#include "meshtv/imaging.hpp"
#include "meshtv/solver_config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace meshtv {

/// lambda * sum |u - f|^p over every entry.
double fidelity_term(const MeshImage& u, const MeshImage& f, double lambda, double p);

/// sum_i |tau_i| ||D_i u||, with channels coupled through the Frobenius norm
/// of the 3 x C gradient stack.
double tv_term(const MeshImage& u, const GradientOperator& op);

/// F(u) = lambda * sum |u_j - f_j|^p + sum_i |tau_i| ||D_i u||.
double objective(const MeshImage& u, const MeshImage& f, const GradientOperator& op, const SolverConfig& config);

/// Entries with |u_e - f_e| > eps (strict).
SupportSet support_eps(const MeshImage& u, const MeshImage& f, double eps);

/// Linearization weights p * |u_e - f_e|^(p-1) aligned with `support.entries`.
std::vector<double> weights(const MeshImage& u, const MeshImage& f, const SupportSet& support, double p);

/// One outer iteration k of the proximal linearization loop.
struct TraceRecord {
  int iter = 0;
  /// F(u^k).
  double objective = 0.0;
  /// Size of the support used for the step from u^k.
  int support_size = 0;
  /// ||u^{k+1} - u^k||.
  double iterate_gap = 0.0;
  /// F(u^k) - F(u^{k+1}) - (rho/2)||u^{k+1} - u^k||^2; nonnegative for exact steps.
  double decrease_slack = 0.0;
  int inner_iterations = 0;
  bool inner_converged = true;
};

struct SolverTrace {
  std::vector<TraceRecord> records;

  [[nodiscard]] int inner_failures() const;
  /// Header `iter,objective,support_size,iterate_gap,decrease_slack,inner_iterations`.
  [[nodiscard]] std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;
};

struct PlmResult {
  MeshImage u;
  SolverTrace trace;
  bool converged = false;
  double final_objective = 0.0;
};

/// Proximal linearization with support shrinking, started from `u0`.
///
/// Every step pins the entries with |u^k - f| <= eps to f and solves the
/// reweighted convex problem with ADMM. Stops once the relative change drops
/// below `outer_tol`, the last `support_window` steps used the same support
/// and the new iterate keeps it, or after `outer_max_iter` steps. With p = 1 a single
/// L1TV solve is performed instead.
PlmResult plm_solve(const MeshImage& f, const GradientOperator& op, const SolverConfig& config,
                    const MeshImage& u0);

/// (mu * sum_i |tau_i| ||D_i|| / (lambda p))^(1/(p-1)): nonzero residuals of
/// a local minimizer are bounded below by this value when mu is the
/// constant of the lower-bound theory. Requires 0 < p < 1.
double theta_bound(const GradientOperator& op, const SolverConfig& config, double mu_estimate);

struct ResidualGap {
  /// Smallest strictly positive |u_e - f_e|, +inf if there is none.
  double min_nonzero_residual = 0.0;
  int zero_count = 0;
};

ResidualGap residual_gap_report(const MeshImage& u, const MeshImage& f);

}  // namespace meshtv
