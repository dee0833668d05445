#include "meshtv/diffops.hpp"

#include "meshtv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace meshtv {
namespace {

double compact_block_norm(const Eigen::Matrix3d& columns) {
  const Eigen::Matrix3d gram = columns.transpose() * columns;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

void check_length(std::size_t got, int expected, const char* what) {
  if (got != static_cast<std::size_t>(expected)) {
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(expected) +
                            " entries, got " + std::to_string(got));
  }
}

}  // namespace

Vec3 hat_gradient(const Vec3& apex, const Vec3& b, const Vec3& c) {
  const Vec3 edge = c - b;
  const Vec3 foot = b + ((apex - b).dot(edge) / edge.squaredNorm()) * edge;
  const Vec3 h = apex - foot;
  const double h2 = h.squaredNorm();
  if (!(h2 > 0.0)) throw DegenerateTriangle("zero altitude in gradient computation");
  return h / h2;
}

GradientOperator::GradientOperator(const TriangleMesh& mesh) : vertex_count_(mesh.vertex_count()) {
  const int nt = mesh.triangle_count();
  blocks_.resize(nt);
  tri_areas_ = triangle_areas(mesh);
  block_norms_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    auto& block = blocks_[t];
    block.vertices = tri;
    for (int k = 0; k < 3; ++k) {
      block.columns.col(k) = hat_gradient(mesh.vertex(tri[k]), mesh.vertex(tri[(k + 1) % 3]),
                                          mesh.vertex(tri[(k + 2) % 3]));
    }
    block_norms_[t] = compact_block_norm(block.columns);
  }
}

GradientOperator build_gradient_operator(const TriangleMesh& mesh) { return GradientOperator(mesh); }

std::vector<Vec3> GradientOperator::apply(std::span<const double> u) const {
  check_length(u.size(), vertex_count_, "GradientOperator::apply");
  std::vector<Vec3> out(blocks_.size());
  for (std::size_t t = 0; t < blocks_.size(); ++t) {
    const auto& b = blocks_[t];
    out[t] = b.columns * Vec3(u[b.vertices[0]], u[b.vertices[1]], u[b.vertices[2]]);
  }
  return out;
}

std::vector<double> GradientOperator::apply_adjoint(std::span<const Vec3> z,
                                                    std::span<const double> weights) const {
  check_length(z.size(), triangle_count(), "GradientOperator::apply_adjoint (z)");
  check_length(weights.size(), triangle_count(), "GradientOperator::apply_adjoint (weights)");
  std::vector<double> out(vertex_count_, 0.0);
  for (std::size_t t = 0; t < blocks_.size(); ++t) {
    const auto& b = blocks_[t];
    const Vec3 local = weights[t] * (b.columns.transpose() * z[t]);
    for (int k = 0; k < 3; ++k) out[b.vertices[k]] += local[k];
  }
  return out;
}

Eigen::MatrixXd GradientOperator::apply_channels(const Eigen::MatrixXd& u) const {
  check_length(static_cast<std::size_t>(u.rows()), vertex_count_, "GradientOperator::apply_channels");
  const Eigen::Index channels = u.cols();
  Eigen::MatrixXd out(3 * blocks_.size(), channels);
  for (std::size_t t = 0; t < blocks_.size(); ++t) {
    const auto& b = blocks_[t];
    for (Eigen::Index c = 0; c < channels; ++c) {
      out.block<3, 1>(3 * t, c) =
          b.columns * Vec3(u(b.vertices[0], c), u(b.vertices[1], c), u(b.vertices[2], c));
    }
  }
  return out;
}

Eigen::MatrixXd GradientOperator::apply_adjoint_channels(const Eigen::MatrixXd& z,
                                                         std::span<const double> weights) const {
  check_length(static_cast<std::size_t>(z.rows()), 3 * triangle_count(),
               "GradientOperator::apply_adjoint_channels (z)");
  check_length(weights.size(), triangle_count(), "GradientOperator::apply_adjoint_channels (weights)");
  const Eigen::Index channels = z.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(vertex_count_, channels);
  for (std::size_t t = 0; t < blocks_.size(); ++t) {
    const auto& b = blocks_[t];
    for (Eigen::Index c = 0; c < channels; ++c) {
      const Vec3 local = weights[t] * (b.columns.transpose() * z.block<3, 1>(3 * t, c));
      for (int k = 0; k < 3; ++k) out(b.vertices[k], c) += local[k];
    }
  }
  return out;
}

GramMatrix assemble_gram(const GradientOperator& op) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * op.blocks().size());
  for (std::size_t t = 0; t < op.blocks().size(); ++t) {
    const auto& b = op.blocks()[t];
    const Eigen::Matrix3d local = op.tri_areas()[t] * (b.columns.transpose() * b.columns);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) triplets.emplace_back(b.vertices[r], b.vertices[c], local(r, c));
  }
  GramMatrix gram(op.vertex_count(), op.vertex_count());
  gram.setFromTriplets(triplets.begin(), triplets.end());
  return gram;
}

std::vector<double> block_spectral_norms(const GradientOperator& op) { return op.block_norms(); }

}  // namespace meshtv
