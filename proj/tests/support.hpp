#pragma once

// Fixtures and brute-force oracles shared by the unit tests and the acceptance runner.

#include "meshtv/diffops.hpp"
#include "meshtv/imaging.hpp"
#include "meshtv/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace testsupport {

using meshtv::TriangleMesh;
using meshtv::Vec3;

inline TriangleMesh right_triangle() {
  return TriangleMesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{0, 1, 2}});
}

// Unit square split along the diagonal 0-2.
inline TriangleMesh two_triangles() {
  return TriangleMesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}, {{0, 1, 2}, {0, 2, 3}});
}

// n x n cells on [0,1]^2 in the z = 0 plane, each cell cut into two triangles,
// with interior vertices jittered so the triangles are not all congruent.
inline TriangleMesh planar_grid(int n, double jitter = 0.0, unsigned seed = 7) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-jitter, jitter);
  std::vector<Vec3> v;
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= n; ++c) {
      double x = static_cast<double>(c) / n;
      double y = static_cast<double>(r) / n;
      if (r > 0 && r < n && c > 0 && c < n) {
        x += d(rng) / n;
        y += d(rng) / n;
      }
      v.emplace_back(x, y, 0.0);
    }
  }
  std::vector<meshtv::Triangle> t;
  auto id = [n](int r, int c) { return r * (n + 1) + c; };
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      t.push_back({id(r, c), id(r, c + 1), id(r + 1, c + 1)});
      t.push_back({id(r, c), id(r + 1, c + 1), id(r + 1, c)});
    }
  }
  return TriangleMesh(std::move(v), std::move(t));
}

// Dense 3 x N_v matrix of one block, built directly from barycentric
// coordinates: the gradient of lambda_k solves [e1 e2]^T g = [dl(1) dl(2)]
// within the triangle plane.
inline Eigen::Matrix3d barycentric_gradients(const Vec3& a, const Vec3& b, const Vec3& c) {
  Eigen::Matrix<double, 3, 2> e;
  e.col(0) = b - a;
  e.col(1) = c - a;
  const Eigen::Matrix2d g = e.transpose() * e;
  // Gradients of lambda_b and lambda_a-relative coordinates (s, t) in the plane.
  const Eigen::Matrix<double, 3, 2> grads = e * g.inverse();
  Eigen::Matrix3d out;
  out.col(1) = grads.col(0);
  out.col(2) = grads.col(1);
  out.col(0) = -grads.col(0) - grads.col(1);
  return out;
}

inline Eigen::MatrixXd dense_block(const meshtv::GradientOperator& op, int i) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, op.vertex_count());
  const auto& blk = op.blocks()[i];
  for (int k = 0; k < 3; ++k) d.col(blk.vertices[k]) += blk.columns.col(k);
  return d;
}

inline Eigen::MatrixXd dense_gram(const meshtv::GradientOperator& op) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(op.vertex_count(), op.vertex_count());
  for (int i = 0; i < op.triangle_count(); ++i) {
    const Eigen::MatrixXd d = dense_block(op, i);
    g += op.tri_areas()[i] * d.transpose() * d;
  }
  return g;
}

// Largest real root of the monic cubic x^3 + a x^2 + b x + c with three
// real roots (trigonometric form).
inline double largest_cubic_root(double a, double b, double c) {
  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
  const double theta = std::acos(std::clamp(r / std::sqrt(q * q * q), -1.0, 1.0));
  const double pi = std::acos(-1.0);
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k)
    best = std::max(best, -2.0 * std::sqrt(q) * std::cos((theta + 2.0 * pi * k) / 3.0) - a / 3.0);
  return best;
}

// Spectral norm of a 3x3 matrix via the characteristic polynomial of B^T B.
inline double spectral_norm_charpoly(const Eigen::Matrix3d& b) {
  const Eigen::Matrix3d m = b.transpose() * b;
  const double tr = m.trace();
  const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) +
                        m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  return std::sqrt(largest_cubic_root(-tr, minors, -m.determinant()));
}

// Minimizes a scalar function over [lo, hi] by successive grid refinement.
// Each level scans `points` samples and narrows to two cells around the best.
template <class Fn>
double grid_argmin_1d(const Fn& fn, double lo, double hi, double final_step,
                             int points = 201) {
  double best = lo;
  for (;;) {
    const double step = (hi - lo) / (points - 1);
    double best_val = std::numeric_limits<double>::infinity();
    for (int k = 0; k < points; ++k) {
      const double x = lo + k * step;
      const double val = fn(x);
      if (val < best_val) {
        best_val = val;
        best = x;
      }
    }
    if (step <= final_step) return best;
    lo = best - 2.0 * step;
    hi = best + 2.0 * step;
  }
}

// Same over a box in R^d, narrowing to `radius` cells around the best point
// per level. Returns the best grid point at the final level.
template <int D, class Fn>
std::array<double, D> grid_argmin(const Fn& fn,
                                  std::array<double, D> lo, std::array<double, D> hi, double final_step,
                                  int points, double radius = 4.0) {
  std::array<double, D> best = lo;
  for (;;) {
    std::array<double, D> step{};
    double max_step = 0.0;
    for (int k = 0; k < D; ++k) {
      step[k] = (hi[k] - lo[k]) / (points - 1);
      max_step = std::max(max_step, step[k]);
    }
    double best_val = std::numeric_limits<double>::infinity();
    std::array<int, D> idx{};
    std::array<double, D> x{};
    for (;;) {
      for (int k = 0; k < D; ++k) x[k] = lo[k] + idx[k] * step[k];
      const double val = fn(x);
      if (val < best_val) {
        best_val = val;
        best = x;
      }
      int k = 0;
      while (k < D && ++idx[k] == points) idx[k++] = 0;
      if (k == D) break;
    }
    if (max_step <= final_step) return best;
    for (int k = 0; k < D; ++k) {
      lo[k] = best[k] - radius * step[k];
      hi[k] = best[k] + radius * step[k];
    }
  }
}

// Objective of one proximal step on a tiny mesh:
// lambda * sum_{e in support} w_e |u_e - f_e| + TV(u) + rho/2 ||u - anchor||^2.
inline double step_objective(const meshtv::GradientOperator& op, const std::vector<double>& f,
                             const std::vector<double>& anchor, const std::vector<int>& support,
                             const std::vector<double>& w, double lambda, double rho, const std::vector<double>& u) {
  double fit = 0.0;
  for (std::size_t s = 0; s < support.size(); ++s) fit += w[s] * std::abs(u[support[s]] - f[support[s]]);
  double tv = 0.0;
  const auto du = op.apply(u);
  for (int i = 0; i < op.triangle_count(); ++i) tv += op.tri_areas()[i] * du[i].norm();
  double prox = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) prox += (u[j] - anchor[j]) * (u[j] - anchor[j]);
  return lambda * fit + tv + 0.5 * rho * prox;
}

// Brute-force minimizer of the proximal step on the two-triangle mesh with
// vertices 1 and 3 free and vertices 0 and 2 pinned to f.
inline std::array<double, 2> tiny_step_oracle(const meshtv::GradientOperator& op, const std::vector<double>& f,
                                              const std::vector<double>& anchor, double lambda, double rho) {
  const std::vector<int> support{1, 3};
  const std::vector<double> w{1.0, 1.0};
  const double lo = std::min(*std::min_element(f.begin(), f.end()), *std::min_element(anchor.begin(), anchor.end()));
  const double hi = std::max(*std::max_element(f.begin(), f.end()), *std::max_element(anchor.begin(), anchor.end()));
  auto fn = [&](const std::array<double, 2>& x) {
    std::vector<double> u = f;
    u[1] = x[0];
    u[3] = x[1];
    return step_objective(op, f, anchor, support, w, lambda, rho, u);
  };
  return grid_argmin<2>(fn, {lo - 0.1, lo - 0.1}, {hi + 0.1, hi + 0.1}, 1e-4, 201);
}

// Brute-force L1TV minimizer on a 4-vertex mesh. Minimizers obey the
// maximum principle, so the search box is [min f, max f]^4.
inline std::array<double, 4> tiny_l1tv_oracle(const meshtv::GradientOperator& op, const std::vector<double>& f,
                                              double lambda) {
  const std::vector<int> support{0, 1, 2, 3};
  const std::vector<double> w(4, 1.0);
  const double lo = *std::min_element(f.begin(), f.end());
  const double hi = *std::max_element(f.begin(), f.end());
  auto fn = [&](const std::array<double, 4>& x) {
    const std::vector<double> u(x.begin(), x.end());
    return step_objective(op, f, f, support, w, lambda, 0.0, u);
  };
  return grid_argmin<4>(fn, {lo, lo, lo, lo}, {hi, hi, hi, hi}, 2e-4, 21);
}

struct ArgminMatch {
  /// Max-norm distance to the oracle's grid minimizer.
  double distance = 0.0;
  /// True when a grid point within `radius` of `u` attains the oracle's
  /// minimum value, i.e. `u` sits on a set of non-unique minimizers.
  bool near_minimizer_set = false;
};

// Compares a 4-vertex L1TV solution against the brute-force minimizers.
inline ArgminMatch match_l1tv(const meshtv::GradientOperator& op, const std::vector<double>& f, double lambda,
                              const std::vector<double>& u, double radius) {
  const std::vector<int> support{0, 1, 2, 3};
  const std::vector<double> w(4, 1.0);
  auto fn = [&](const std::array<double, 4>& x) {
    const std::vector<double> v(x.begin(), x.end());
    return step_objective(op, f, f, support, w, lambda, 0.0, v);
  };
  const auto best = tiny_l1tv_oracle(op, f, lambda);
  ArgminMatch m;
  for (int j = 0; j < 4; ++j) m.distance = std::max(m.distance, std::abs(u[j] - best[j]));
  const std::array<double, 4> lo{u[0] - radius, u[1] - radius, u[2] - radius, u[3] - radius};
  const std::array<double, 4> hi{u[0] + radius, u[1] + radius, u[2] + radius, u[3] + radius};
  const auto local = grid_argmin<4>(fn, lo, hi, radius / 10.0, 21);
  const double target = fn(best);
  m.near_minimizer_set = fn(local) <= target + 1e-8 * std::max(1.0, std::abs(target));
  return m;
}

}  // namespace testsupport
