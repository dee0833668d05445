#pragma once

#include "meshtv/mesh.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <limits>

namespace meshtv {

/// Per-vertex intensities, one column per channel (1 = gray, 3 = RGB).
///
/// Images read from disk or produced for output live in [0,1]; solver
/// iterates may leave that range and are brought back with clamp_to_unit.
class MeshImage {
 public:
  MeshImage(int vertex_count, int channel_count);
  explicit MeshImage(Eigen::MatrixXd values);

  static MeshImage constant(int vertex_count, int channel_count, double value);

  [[nodiscard]] int vertex_count() const { return static_cast<int>(values_.rows()); }
  [[nodiscard]] int channel_count() const { return static_cast<int>(values_.cols()); }
  [[nodiscard]] int value_count() const { return static_cast<int>(values_.size()); }

  [[nodiscard]] double operator()(int vertex, int channel = 0) const { return values_(vertex, channel); }
  double& operator()(int vertex, int channel = 0) { return values_(vertex, channel); }

  [[nodiscard]] const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }

  [[nodiscard]] bool in_unit_range() const;

  friend bool operator==(const MeshImage& a, const MeshImage& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

/// Throws DimensionMismatch unless both images have the same shape.
void require_same_shape(const MeshImage& a, const MeshImage& b, const char* context);

struct NoiseSpec {
  double level = 0.0;
  std::uint64_t seed = 0;
};

/// Salt-and-pepper corruption: each value independently becomes 0 with
/// probability level/2, 1 with probability level/2, and is kept otherwise.
MeshImage add_salt_pepper(const MeshImage& image, const NoiseSpec& spec);

/// Returned by psnr when the images are identical.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

/// 10 log10(n / ||u - reference||^2) with n the total number of values.
double psnr(const MeshImage& u, const MeshImage& reference);

MeshImage clamp_to_unit(const MeshImage& image);

// I/O. Text files hold one line per vertex with 1 or 3 values in [0,1].
// PLY files carry a `quality` property in [0,1] (gray) or `red,green,blue`
// in 0..255 (color).

MeshImage read_image_text(const std::filesystem::path& path);
void write_image_text(const std::filesystem::path& path, const MeshImage& image);

MeshImage read_image_ply(const std::filesystem::path& path);
void write_image_ply(const std::filesystem::path& path, const TriangleMesh& mesh, const MeshImage& image);

/// Dispatches on extension: `.ply` uses the PLY reader, anything else the text reader.
MeshImage load_image(const std::filesystem::path& path);

}  // namespace meshtv
