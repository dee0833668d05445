#include "meshtv/errors.hpp"
#include "meshtv/experiment.hpp"

#include <Eigen/Geometry>

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace meshtv {
namespace {

// Fixed frame so that no vertex of the icospheres lands on a region boundary.
Eigen::Matrix3d pattern_frame() {
  return Eigen::AngleAxisd(0.4, Vec3(1.0, 2.0, 3.0).normalized()).toRotationMatrix();
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw InvalidParams("synthetic: bad integer for " + std::string(key) + ": '" + std::string(value) + "'");
  return out;
}

}  // namespace

TriangleMesh make_icosphere(int subdivisions) {
  if (subdivisions < 0 || subdivisions > 8)
    throw InvalidParams("icosphere subdivisions must lie in [0, 8], got " + std::to_string(subdivisions));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> vertices = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
      {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& v : vertices) v.normalize();
  std::vector<Triangle> triangles = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
  };

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoints;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      vertices.push_back((vertices[a] + vertices[b]).normalized());
      const int id = static_cast<int>(vertices.size()) - 1;
      midpoints.emplace(key, id);
      return id;
    };
    std::vector<Triangle> refined;
    refined.reserve(4 * triangles.size());
    for (const auto& t : triangles) {
      const int ab = midpoint(t[0], t[1]);
      const int bc = midpoint(t[1], t[2]);
      const int ca = midpoint(t[2], t[0]);
      refined.push_back({t[0], ab, ca});
      refined.push_back({t[1], bc, ab});
      refined.push_back({t[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    triangles = std::move(refined);
  }
  return TriangleMesh(std::move(vertices), std::move(triangles));
}

SyntheticScene generate_synthetic(const SyntheticParams& params) {
  if (params.channels != 1 && params.channels != 3)
    throw InvalidParams("synthetic images have 1 or 3 channels");
  TriangleMesh mesh = make_icosphere(params.subdivisions);
  MeshImage image(mesh.vertex_count(), params.channels);
  const Eigen::Matrix3d frame = pattern_frame();

  std::string pattern_name;
  for (int j = 0; j < mesh.vertex_count(); ++j) {
    const Vec3 x = frame * mesh.vertex(j);
    int region = 0;
    switch (params.pattern) {
      case SyntheticPattern::TwoPatch:
        region = x.z() > 0.0 ? 1 : 0;
        break;
      case SyntheticPattern::Checker:
        region = (x.x() > 0.0) + (x.y() > 0.0) + (x.z() > 0.0);
        break;
    }
    if (params.channels == 1) {
      static constexpr std::array<double, 2> kTwoPatch = {0.25, 0.75};
      static constexpr std::array<double, 4> kChecker = {0.1, 0.4, 0.6, 0.9};
      image(j) = params.pattern == SyntheticPattern::TwoPatch ? kTwoPatch[region] : kChecker[region];
    } else {
      static constexpr std::array<std::array<double, 3>, 4> kPalette = {{
          {0.2, 0.3, 0.8}, {0.8, 0.3, 0.2}, {0.3, 0.8, 0.3}, {0.9, 0.9, 0.2},
      }};
      for (int c = 0; c < 3; ++c) image(j, c) = kPalette[region][c];
    }
  }
  pattern_name = params.pattern == SyntheticPattern::TwoPatch ? "two_patch" : "checker";
  std::string name = "icosphere" + std::to_string(params.subdivisions) + "_" + pattern_name;
  if (params.channels == 3) name += "_rgb";
  return {std::move(mesh), std::move(image), std::move(name)};
}

SyntheticParams parse_synthetic(std::string_view text) {
  SyntheticParams params;
  bool have_level = false;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw InvalidParams("synthetic: expected key=value, got '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "icosphere_k") {
      params.subdivisions = parse_int(key, value);
      have_level = true;
    } else if (key == "pattern") {
      if (value == "two_patch") {
        params.pattern = SyntheticPattern::TwoPatch;
      } else if (value == "checker") {
        params.pattern = SyntheticPattern::Checker;
      } else {
        throw InvalidParams("synthetic: unknown pattern '" + std::string(value) + "'");
      }
    } else if (key == "channels") {
      params.channels = parse_int(key, value);
    } else {
      throw InvalidParams("synthetic: unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_level) throw InvalidParams("synthetic: icosphere_k is required");
  if (params.subdivisions < 0 || params.subdivisions > 8)
    throw InvalidParams("synthetic: icosphere_k must lie in [0, 8]");
  if (params.channels != 1 && params.channels != 3) throw InvalidParams("synthetic: channels must be 1 or 3");
  return params;
}

}  // namespace meshtv
