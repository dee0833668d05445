#include "meshtv/mesh.hpp"

#include "meshtv/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

namespace meshtv {

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = vertex_count();
  const int nt = triangle_count();
  if (nt == 0) throw ParseError("mesh has no triangles");

  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int idx : tri) {
      if (idx < 0 || idx >= nv) {
        throw IndexOutOfRange("triangle " + std::to_string(t) + " references vertex " +
                              std::to_string(idx) + " outside [0, " + std::to_string(nv) + ")");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw DegenerateTriangle("triangle " + std::to_string(t) + " repeats a vertex index");
  }

  const double diag = bounding_box_diagonal();
  const double min_area = 1e-12 * diag * diag;
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    const double area = triangle_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (!(area > 0.0) || area < min_area)
      throw DegenerateTriangle("triangle " + std::to_string(t) + " has area " + std::to_string(area));
  }

  // Stars in CSR layout.
  star_offsets_.assign(nv + 1, 0);
  for (const auto& tri : triangles_)
    for (int idx : tri) ++star_offsets_[idx + 1];
  std::partial_sum(star_offsets_.begin(), star_offsets_.end(), star_offsets_.begin());
  star_triangles_.resize(star_offsets_.back());
  std::vector<int> cursor(star_offsets_.begin(), star_offsets_.end() - 1);
  for (int t = 0; t < nt; ++t)
    for (int idx : triangles_[t]) star_triangles_[cursor[idx]++] = t;
  for (int v = 0; v < nv; ++v) {
    if (star_offsets_[v] == star_offsets_[v + 1])
      throw IsolatedVertex("vertex " + std::to_string(v) + " belongs to no triangle");
  }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(3 * static_cast<std::size_t>(nt));
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(edges.begin(), edges.end());
  boundary_.assign(nv, false);
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i == 1) {
      boundary_[edges[i].first] = true;
      boundary_[edges[i].second] = true;
    }
    i = j;
  }
}

std::span<const int> TriangleMesh::star(int i) const {
  return {star_triangles_.data() + star_offsets_[i],
          static_cast<std::size_t>(star_offsets_[i + 1] - star_offsets_[i])};
}

double TriangleMesh::bounding_box_diagonal() const {
  if (vertices_.empty()) return 0.0;
  Vec3 lo = vertices_.front();
  Vec3 hi = vertices_.front();
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

std::vector<double> triangle_areas(const TriangleMesh& mesh) {
  std::vector<double> areas(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    areas[t] = triangle_area(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
  }
  return areas;
}

double ControlCellAreas::total() const { return std::accumulate(s.begin(), s.end(), 0.0); }

ControlCellAreas control_cell_areas(const TriangleMesh& mesh) {
  const auto areas = triangle_areas(mesh);
  ControlCellAreas cells;
  cells.s.assign(mesh.vertex_count(), 0.0);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    for (int t : mesh.star(v)) cells.s[v] += areas[t] / 3.0;
  return cells;
}

double integrate(const ControlCellAreas& cells, std::span<const double> u) {
  if (u.size() != cells.s.size())
    throw DimensionMismatch("integrate: image length does not match vertex count");
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * cells.s[i];
  return sum;
}

}  // namespace meshtv
