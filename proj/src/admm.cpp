#include "meshtv/admm.hpp"

#include "meshtv/errors.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <string>

namespace meshtv {

double shrink_1d(double x, double threshold) {
  const double mag = std::abs(x) - threshold;
  if (mag <= 0.0) return 0.0;
  return x > 0.0 ? mag : -mag;
}

Eigen::VectorXd shrink_vec(const Eigen::VectorXd& x, double threshold) {
  const double norm = x.norm();
  if (norm <= threshold) return Eigen::VectorXd::Zero(x.size());
  return ((norm - threshold) / norm) * x;
}

NormalEquationSystem::NormalEquationSystem(const GramMatrix& gram, double beta1, double beta2,
                                           double prox_weight, LinearSolverKind kind,
                                           int direct_solver_max_vertices)
    : beta1_(beta1), beta2_(beta2), prox_weight_(prox_weight) {
  if (gram.rows() != gram.cols()) throw DimensionMismatch("Gram matrix is not square");
  const double shift = prox_weight + beta1;
  if (!(shift > 0.0)) throw SingularSystem("prox_weight + beta1 must be positive");
  Eigen::SparseMatrix<double> identity(gram.rows(), gram.cols());
  identity.setIdentity();
  matrix_ = beta2 * gram + shift * identity;
  matrix_.makeCompressed();

  const bool direct = kind == LinearSolverKind::Direct ||
                      (kind == LinearSolverKind::Automatic && gram.rows() <= direct_solver_max_vertices);
  if (direct) {
    direct_ = std::make_unique<Direct>(matrix_);
    if (direct_->info() != Eigen::Success) throw SingularSystem("LDL^T factorization failed");
  }
}

NormalEquationSystem::~NormalEquationSystem() = default;
NormalEquationSystem::NormalEquationSystem(NormalEquationSystem&&) noexcept = default;
NormalEquationSystem& NormalEquationSystem::operator=(NormalEquationSystem&&) noexcept = default;

Eigen::MatrixXd NormalEquationSystem::solve(const Eigen::MatrixXd& rhs, double cg_tol, int cg_max_iter) const {
  if (rhs.rows() != matrix_.rows()) throw DimensionMismatch("normal equation: rhs length mismatch");
  if (direct_) {
    Eigen::MatrixXd x = direct_->solve(rhs);
    if (direct_->info() != Eigen::Success) throw SingularSystem("LDL^T solve failed");
    return x;
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(cg_tol);
  cg.setMaxIterations(cg_max_iter);
  cg.compute(matrix_);
  Eigen::MatrixXd x(rhs.rows(), rhs.cols());
  for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
    x.col(c) = cg.solve(rhs.col(c));
    if (cg.info() != Eigen::Success) {
      throw IterationLimitExceeded("conjugate gradient stopped at relative residual " +
                                   std::to_string(cg.error()) + " after " +
                                   std::to_string(cg.iterations()) + " iterations");
    }
  }
  return x;
}

NormalEquationSystem make_normal_system(const GradientOperator& op, const SolverConfig& config,
                                        double prox_weight) {
  return NormalEquationSystem(assemble_gram(op), config.effective_beta1(), config.effective_beta2(),
                              prox_weight, config.linear_solver, config.direct_solver_max_vertices);
}

std::vector<double> solve_normal_equation(const NormalEquationSystem& system, std::span<const double> rhs,
                                          const SolverConfig& config) {
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  const Eigen::MatrixXd x = system.solve(b, config.cg_tol, config.cg_max_iter);
  return {x.data(), x.data() + x.size()};
}

AdmmResult admm_solve(const MeshImage& f, const MeshImage& u_k, const SupportSet& support,
                      std::span<const double> weights, const GradientOperator& op,
                      const SolverConfig& config, const NormalEquationSystem& system) {
  require_same_shape(f, u_k, "admm_solve");
  if (f.vertex_count() != op.vertex_count())
    throw DimensionMismatch("admm_solve: image and operator vertex counts differ");
  if (weights.size() != support.size())
    throw DimensionMismatch("admm_solve: weights are not aligned with the support");
  if (system.matrix().rows() != op.vertex_count())
    throw DimensionMismatch("admm_solve: normal system size differs from the mesh");

  const int nv = f.vertex_count();
  const int channels = f.channel_count();
  const int nt = op.triangle_count();
  const double beta1 = system.beta1();
  const double beta2 = system.beta2();
  const double rho = system.prox_weight();
  const double lambda = config.lambda;

  const Eigen::MatrixXd& fv = f.values();
  const Eigen::MatrixXd& anchor = u_k.values();

  // Entry e = j * channels + c is in the support iff in_support[e].
  std::vector<char> in_support(static_cast<std::size_t>(nv) * channels, 0);
  for (int e : support.entries) {
    if (e < 0 || e >= nv * channels) throw DimensionMismatch("admm_solve: support entry out of range");
    in_support[e] = 1;
  }

  Eigen::MatrixXd v = anchor;
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(nv, channels);
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(3 * nt, channels);
  Eigen::MatrixXd z(3 * nt, channels);
  Eigen::MatrixXd y_bar = Eigen::MatrixXd::Zero(nv, channels);
  Eigen::MatrixXd dv = op.apply_channels(v);
  const double z_threshold = 1.0 / beta2;
  const double scale = 1.0 / std::sqrt(static_cast<double>(nv));

  AdmmResult result{MeshImage(nv, channels)};
  for (int t = 1; t <= config.inner_max_iter; ++t) {
    // (y, z) step.
    for (std::size_t s = 0; s < support.entries.size(); ++s) {
      const int e = support.entries[s];
      const int j = e / channels;
      const int c = e % channels;
      y_bar(j, c) = shrink_1d(v(j, c) - fv(j, c) + eta(j, c) / beta1, lambda * weights[s] / beta1);
    }
    for (int i = 0; i < nt; ++i) {
      auto zi = z.middleRows<3>(3 * i);
      zi = dv.middleRows<3>(3 * i) + mu.middleRows<3>(3 * i) / beta2;
      const double norm = zi.norm();
      if (norm <= z_threshold) {
        zi.setZero();
      } else {
        zi *= (norm - z_threshold) / norm;
      }
    }

    // v step.
    const Eigen::MatrixXd rhs = op.apply_adjoint_channels(beta2 * z - mu, op.tri_areas()) +
                                beta1 * (y_bar + fv) - eta + rho * anchor;
    v = system.solve(rhs, config.cg_tol, config.cg_max_iter);
    if (!v.allFinite()) throw NonFiniteIterate("admm_solve: non-finite iterate at step " + std::to_string(t));
    dv = op.apply_channels(v);

    // Multipliers; y_bar is zero off the support so one update covers both branches.
    const Eigen::MatrixXd fit_gap = v - fv - y_bar;
    const Eigen::MatrixXd grad_gap = dv - z;
    eta += beta1 * fit_gap;
    mu += beta2 * grad_gap;

    double on_support = 0.0;
    double off_support = 0.0;
    for (int j = 0; j < nv; ++j) {
      for (int c = 0; c < channels; ++c) {
        const double g = fit_gap(j, c);
        (in_support[static_cast<std::size_t>(j) * channels + c] ? on_support : off_support) += g * g;
      }
    }
    const double residual =
        scale * std::max({std::sqrt(on_support), std::sqrt(off_support), grad_gap.norm()});
    result.iterations = t;
    result.residual = residual;
    if (residual < config.inner_tol) {
      result.converged = true;
      break;
    }
  }

  for (int j = 0; j < nv; ++j)
    for (int c = 0; c < channels; ++c)
      if (!in_support[static_cast<std::size_t>(j) * channels + c]) v(j, c) = fv(j, c);
  result.u = MeshImage(std::move(v));
  return result;
}

AdmmResult admm_solve(const MeshImage& f, const MeshImage& u_k, const SupportSet& support,
                      std::span<const double> weights, const GradientOperator& op,
                      const SolverConfig& config) {
  config.validate();
  const auto system = make_normal_system(op, config, config.prox_weight);
  return admm_solve(f, u_k, support, weights, op, config, system);
}

AdmmResult solve_l1tv_detailed(const MeshImage& f, const GradientOperator& op, const SolverConfig& config) {
  config.validate();
  const auto system = make_normal_system(op, config, 0.0);
  const auto support = SupportSet::all(f.vertex_count(), f.channel_count());
  const std::vector<double> unit(support.size(), 1.0);
  return admm_solve(f, f, support, unit, op, config, system);
}

MeshImage solve_l1tv(const MeshImage& f, const GradientOperator& op, const SolverConfig& config) {
  return solve_l1tv_detailed(f, op, config).u;
}

}  // namespace meshtv
