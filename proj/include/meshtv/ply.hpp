#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace meshtv {

/// Contents of an ASCII PLY file: scalar vertex properties by name and the
/// face index lists. Elements other than `vertex` and `face` are skipped.
struct PlyContents {
  std::vector<std::string> vertex_property_names;
  /// Row-major, one row of `vertex_property_names.size()` values per vertex.
  std::vector<double> vertex_values;
  std::vector<std::vector<int>> faces;

  [[nodiscard]] std::size_t vertex_count() const;
  [[nodiscard]] std::optional<std::size_t> property_index(const std::string& name) const;
  /// Column of a vertex property; throws ParseError if missing.
  [[nodiscard]] std::vector<double> property(const std::string& name) const;
};

PlyContents read_ply(const std::filesystem::path& path);

}  // namespace meshtv
