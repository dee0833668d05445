#pragma once

#include "meshtv/diffops.hpp"
#include "meshtv/imaging.hpp"
#include "meshtv/solver_config.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <memory>
#include <span>
#include <vector>

namespace meshtv {

/// argmin_t threshold*|t| + (t - x)^2 / 2.
double shrink_1d(double x, double threshold);

/// Group soft-thresholding: argmin_t threshold*||t|| + ||t - x||^2 / 2.
/// Returns zero whenever ||x|| <= threshold, including x = 0.
Eigen::VectorXd shrink_vec(const Eigen::VectorXd& x, double threshold);

/// (beta2 * Gram + (prox_weight + beta1) * I) v = rhs, factorized once and
/// reused for every right-hand side.
class NormalEquationSystem {
 public:
  NormalEquationSystem(const GramMatrix& gram, double beta1, double beta2, double prox_weight,
                       LinearSolverKind kind = LinearSolverKind::Automatic,
                       int direct_solver_max_vertices = 50000);
  ~NormalEquationSystem();
  NormalEquationSystem(NormalEquationSystem&&) noexcept;
  NormalEquationSystem& operator=(NormalEquationSystem&&) noexcept;

  [[nodiscard]] const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  [[nodiscard]] bool uses_direct_solver() const { return direct_ != nullptr; }
  [[nodiscard]] double beta1() const { return beta1_; }
  [[nodiscard]] double beta2() const { return beta2_; }
  [[nodiscard]] double prox_weight() const { return prox_weight_; }

  /// Solves for every column of `rhs`. The CG path throws
  /// IterationLimitExceeded when it cannot reach `cg_tol` (relative residual).
  [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs, double cg_tol, int cg_max_iter) const;

 private:
  using Direct = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>;

  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Direct> direct_;
  double beta1_;
  double beta2_;
  double prox_weight_;
};

/// Builds the system used by one solve with the penalties of `config`.
NormalEquationSystem make_normal_system(const GradientOperator& op, const SolverConfig& config,
                                        double prox_weight);

std::vector<double> solve_normal_equation(const NormalEquationSystem& system, std::span<const double> rhs,
                                          const SolverConfig& config);

struct AdmmResult {
  MeshImage u;
  int iterations = 0;
  bool converged = false;
  /// Scaled primal residual at exit.
  double residual = 0.0;
};

/// ADMM for the convex step
///   min lambda * sum_{e in support} w_e |u_e - f_e| + sum_i |tau_i| ||D_i u|| + (rho/2)||u - u_k||^2
///   s.t. u_e = f_e off the support,
/// with rho = system.prox_weight(). `weights` is aligned with `support.entries`.
/// The returned image equals f bit-exactly off the support.
AdmmResult admm_solve(const MeshImage& f, const MeshImage& u_k, const SupportSet& support,
                      std::span<const double> weights, const GradientOperator& op,
                      const SolverConfig& config, const NormalEquationSystem& system);

/// Same, with rho = config.prox_weight and a freshly assembled system.
AdmmResult admm_solve(const MeshImage& f, const MeshImage& u_k, const SupportSet& support,
                      std::span<const double> weights, const GradientOperator& op,
                      const SolverConfig& config);

/// min lambda * sum |u - f| + sum_i |tau_i| ||D_i u|| by the same ADMM with
/// every entry in the support, unit weights and no proximal term.
AdmmResult solve_l1tv_detailed(const MeshImage& f, const GradientOperator& op, const SolverConfig& config);

MeshImage solve_l1tv(const MeshImage& f, const GradientOperator& op, const SolverConfig& config);

}  // namespace meshtv
