#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <filesystem>
#include <span>
#include <vector>

namespace meshtv {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

/// Validated, immutable triangle mesh with 0-based connectivity.
///
/// Construction rejects out-of-range indices, repeated vertices within a
/// face, faces with area below 1e-12 * (bounding-box diagonal)^2 and
/// vertices that belong to no face. Non-manifold configurations are allowed.
class TriangleMesh {
 public:
  TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  [[nodiscard]] int vertex_count() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int triangle_count() const { return static_cast<int>(triangles_.size()); }

  [[nodiscard]] const std::vector<Vec3>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Triangle>& triangles() const { return triangles_; }
  [[nodiscard]] const Vec3& vertex(int i) const { return vertices_[i]; }
  [[nodiscard]] const Triangle& triangle(int i) const { return triangles_[i]; }

  /// True for vertices on an edge that is incident to exactly one triangle.
  [[nodiscard]] const std::vector<bool>& boundary_flags() const { return boundary_; }

  /// Triangle ids incident to vertex `i`.
  [[nodiscard]] std::span<const int> star(int i) const;

  [[nodiscard]] double bounding_box_diagonal() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<bool> boundary_;
  std::vector<int> star_offsets_;
  std::vector<int> star_triangles_;
};

/// |tau| for one triangle: half the cross-product magnitude.
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

std::vector<double> triangle_areas(const TriangleMesh& mesh);

/// Per-vertex control-cell areas s_i = sum over the star of |tau|/3.
struct ControlCellAreas {
  std::vector<double> s;

  [[nodiscard]] double total() const;
};

ControlCellAreas control_cell_areas(const TriangleMesh& mesh);

/// Integral of the piecewise-linear interpolant of `u` over the mesh.
double integrate(const ControlCellAreas& cells, std::span<const double> u);

enum class MeshFormat { Off, Obj, Ply };

/// Picks the format from the file extension (case-insensitive).
MeshFormat format_from_extension(const std::filesystem::path& path);

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
TriangleMesh load_mesh(const std::filesystem::path& path);

void save_mesh(const std::filesystem::path& path, const TriangleMesh& mesh, MeshFormat format);

}  // namespace meshtv
