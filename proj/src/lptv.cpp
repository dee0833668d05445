#include "meshtv/lptv.hpp"

#include "meshtv/admm.hpp"
#include "meshtv/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

namespace meshtv {
namespace {

void require_operator_shape(const MeshImage& u, const GradientOperator& op, const char* context) {
  if (u.vertex_count() != op.vertex_count())
    throw DimensionMismatch(std::string(context) + ": image and operator vertex counts differ");
}

}  // namespace

double fidelity_term(const MeshImage& u, const MeshImage& f, double lambda, double p) {
  require_same_shape(u, f, "fidelity_term");
  const auto diff = (u.values() - f.values()).array().abs();
  const double sum = p == 1.0 ? diff.sum() : diff.pow(p).sum();
  return lambda * sum;
}

double tv_term(const MeshImage& u, const GradientOperator& op) {
  require_operator_shape(u, op, "tv_term");
  const Eigen::MatrixXd grad = op.apply_channels(u.values());
  double sum = 0.0;
  for (int i = 0; i < op.triangle_count(); ++i) sum += op.tri_areas()[i] * grad.middleRows<3>(3 * i).norm();
  return sum;
}

double objective(const MeshImage& u, const MeshImage& f, const GradientOperator& op, const SolverConfig& config) {
  return fidelity_term(u, f, config.lambda, config.p) + tv_term(u, op);
}

SupportSet support_eps(const MeshImage& u, const MeshImage& f, double eps) {
  require_same_shape(u, f, "support_eps");
  SupportSet support;
  const int channels = u.channel_count();
  for (int j = 0; j < u.vertex_count(); ++j)
    for (int c = 0; c < channels; ++c)
      if (std::abs(u(j, c) - f(j, c)) > eps) support.entries.push_back(j * channels + c);
  return support;
}

std::vector<double> weights(const MeshImage& u, const MeshImage& f, const SupportSet& support, double p) {
  require_same_shape(u, f, "weights");
  const int channels = u.channel_count();
  std::vector<double> w;
  w.reserve(support.size());
  for (int e : support.entries) {
    const double r = std::abs(u(e / channels, e % channels) - f(e / channels, e % channels));
    if (!(r > 0.0)) throw ZeroResidualInSupport("support entry " + std::to_string(e) + " has zero residual");
    w.push_back(p == 1.0 ? 1.0 : p * std::pow(r, p - 1.0));
  }
  return w;
}

int SolverTrace::inner_failures() const {
  int n = 0;
  for (const auto& r : records) n += r.inner_converged ? 0 : 1;
  return n;
}

std::string SolverTrace::to_csv() const {
  std::string out = "iter,objective,support_size,iterate_gap,decrease_slack,inner_iterations\n";
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%d,%.17g,%d,%.17g,%.17g,%d\n", r.iter, r.objective, r.support_size,
                  r.iterate_gap, r.decrease_slack, r.inner_iterations);
    out += line;
  }
  return out;
}

void SolverTrace::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_csv();
  if (!out) throw Error("failed writing " + path.string());
}

PlmResult plm_solve(const MeshImage& f, const GradientOperator& op, const SolverConfig& config,
                    const MeshImage& u0) {
  config.validate();
  require_same_shape(f, u0, "plm_solve");
  require_operator_shape(f, op, "plm_solve");

  if (config.p == 1.0) {
    const double f0 = objective(u0, f, op, config);
    auto l1 = solve_l1tv_detailed(f, op, config);
    const double f1 = objective(l1.u, f, op, config);
    const double gap = (l1.u.values() - u0.values()).norm();
    PlmResult result{std::move(l1.u), {}, false, 0.0};
    result.trace.records.push_back({0, f0, f.value_count(), gap, f0 - f1, l1.iterations, l1.converged});
    result.converged = l1.converged;
    result.final_objective = f1;
    return result;
  }

  const double rho = config.prox_weight;
  const auto system = make_normal_system(op, config, rho);

  MeshImage u = u0;
  double current = objective(u, f, op, config);
  PlmResult result{u, {}, false, 0.0};
  SupportSet last_support;
  int stable_steps = 0;
  for (int k = 0; k < config.outer_max_iter; ++k) {
    const SupportSet support = support_eps(u, f, config.eps_support);
    const std::vector<double> w = weights(u, f, support, config.p);
    stable_steps = (k > 0 && support == last_support) ? stable_steps + 1 : 1;
    AdmmResult step = admm_solve(f, u, support, w, op, config, system);
    if (!step.u.values().allFinite()) throw NonFiniteIterate("plm_solve: non-finite iterate");

    const double next = objective(step.u, f, op, config);
    const double gap = (step.u.values() - u.values()).norm();
    result.trace.records.push_back({k, current, static_cast<int>(support.size()), gap,
                                    current - next - 0.5 * rho * gap * gap, step.iterations,
                                    step.converged});

    const double norm = step.u.values().norm();
    const double relative = norm > 0.0 ? gap / norm : (gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    u = std::move(step.u);
    current = next;
    last_support = support;
    // An empty support pins every entry to f, a fixed point of the iteration.
    if (support.empty() || (relative < config.outer_tol && stable_steps >= config.support_window &&
                            support_eps(u, f, config.eps_support) == support)) {
      result.converged = true;
      break;
    }
  }
  result.u = std::move(u);
  result.final_objective = current;
  return result;
}

double theta_bound(const GradientOperator& op, const SolverConfig& config, double mu_estimate) {
  if (!(config.p > 0.0 && config.p < 1.0))
    throw InvalidP("theta_bound requires 0 < p < 1, got " + std::to_string(config.p));
  if (!(mu_estimate > 0.0)) throw InvalidParams("mu_estimate must be positive");
  if (!(config.lambda > 0.0)) throw InvalidConfig("lambda must be positive");
  double weighted_norms = 0.0;
  for (int i = 0; i < op.triangle_count(); ++i) weighted_norms += op.tri_areas()[i] * op.block_norms()[i];
  return std::pow(mu_estimate * weighted_norms / (config.lambda * config.p), 1.0 / (config.p - 1.0));
}

ResidualGap residual_gap_report(const MeshImage& u, const MeshImage& f) {
  require_same_shape(u, f, "residual_gap_report");
  ResidualGap gap{std::numeric_limits<double>::infinity(), 0};
  const Eigen::ArrayXXd diff = (u.values() - f.values()).array().abs();
  for (Eigen::Index i = 0; i < diff.size(); ++i) {
    const double r = diff.data()[i];
    if (r == 0.0) {
      ++gap.zero_count;
    } else if (r < gap.min_nonzero_residual) {
      gap.min_nonzero_residual = r;
    }
  }
  return gap;
}

}  // namespace meshtv
