#pragma once

#include "meshtv/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <span>
#include <vector>

namespace meshtv {

/// The nonzero part of one per-triangle block D_i: column k is the gradient
/// of the hat function of `vertices[k]` restricted to the triangle.
struct GradientBlock {
  Triangle vertices;
  Eigen::Matrix3d columns;
};

/// Discrete gradient of piecewise-linear vertex functions, one constant
/// 3-vector per triangle.
///
/// Multichannel images are N_v x C matrices. The stacked gradient of such an
/// image is a 3*N_tau x C matrix whose rows 3i..3i+2 hold D_i applied to every
/// channel.
class GradientOperator {
 public:
  explicit GradientOperator(const TriangleMesh& mesh);

  [[nodiscard]] int vertex_count() const { return vertex_count_; }
  [[nodiscard]] int triangle_count() const { return static_cast<int>(blocks_.size()); }
  [[nodiscard]] const std::vector<GradientBlock>& blocks() const { return blocks_; }
  [[nodiscard]] const std::vector<double>& tri_areas() const { return tri_areas_; }
  [[nodiscard]] const std::vector<double>& block_norms() const { return block_norms_; }

  /// D_i u for every triangle.
  [[nodiscard]] std::vector<Vec3> apply(std::span<const double> u) const;
  /// sum_i weights_i * D_i^T z_i.
  [[nodiscard]] std::vector<double> apply_adjoint(std::span<const Vec3> z,
                                                  std::span<const double> weights) const;

  [[nodiscard]] Eigen::MatrixXd apply_channels(const Eigen::MatrixXd& u) const;
  [[nodiscard]] Eigen::MatrixXd apply_adjoint_channels(const Eigen::MatrixXd& z,
                                                       std::span<const double> weights) const;

 private:
  int vertex_count_;
  std::vector<GradientBlock> blocks_;
  std::vector<double> tri_areas_;
  std::vector<double> block_norms_;
};

GradientOperator build_gradient_operator(const TriangleMesh& mesh);

/// Gradient of the hat function of vertex `apex` on the triangle (apex, b, c):
/// h / |h|^2 where h runs from the foot of the altitude on line bc to the apex.
Vec3 hat_gradient(const Vec3& apex, const Vec3& b, const Vec3& c);

/// sum_i |tau_i| D_i^T D_i, symmetric positive semidefinite.
using GramMatrix = Eigen::SparseMatrix<double>;

GramMatrix assemble_gram(const GradientOperator& op);

/// Largest singular value of each compacted 3x3 block.
std::vector<double> block_spectral_norms(const GradientOperator& op);

}  // namespace meshtv
