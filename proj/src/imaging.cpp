#include "meshtv/imaging.hpp"

#include "meshtv/errors.hpp"

#include <cmath>
#include <random>
#include <string>
#include <utility>

namespace meshtv {
namespace {

void check_channels(Eigen::Index channels) {
  if (channels != 1 && channels != 3)
    throw DimensionMismatch("images have 1 or 3 channels, got " + std::to_string(channels));
}

// Uniform double in [0,1) from the top 53 bits of a 64-bit draw.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

MeshImage::MeshImage(int vertex_count, int channel_count)
    : values_(Eigen::MatrixXd::Zero(vertex_count, channel_count)) {
  check_channels(channel_count);
}

MeshImage::MeshImage(Eigen::MatrixXd values) : values_(std::move(values)) { check_channels(values_.cols()); }

MeshImage MeshImage::constant(int vertex_count, int channel_count, double value) {
  MeshImage image(vertex_count, channel_count);
  image.values_.setConstant(value);
  return image;
}

bool MeshImage::in_unit_range() const {
  return (values_.array() >= 0.0).all() && (values_.array() <= 1.0).all();
}

void require_same_shape(const MeshImage& a, const MeshImage& b, const char* context) {
  if (a.vertex_count() != b.vertex_count() || a.channel_count() != b.channel_count()) {
    throw DimensionMismatch(std::string(context) + ": image shapes differ (" +
                            std::to_string(a.vertex_count()) + "x" + std::to_string(a.channel_count()) +
                            " vs " + std::to_string(b.vertex_count()) + "x" +
                            std::to_string(b.channel_count()) + ")");
  }
}

MeshImage add_salt_pepper(const MeshImage& image, const NoiseSpec& spec) {
  if (!(spec.level >= 0.0 && spec.level <= 1.0))
    throw InvalidParams("noise level must lie in [0,1], got " + std::to_string(spec.level));
  std::mt19937_64 rng(spec.seed);
  MeshImage out = image;
  const double half = 0.5 * spec.level;
  for (int j = 0; j < image.vertex_count(); ++j) {
    for (int c = 0; c < image.channel_count(); ++c) {
      const double r = unit_draw(rng);
      if (r < half) {
        out(j, c) = 0.0;
      } else if (r < spec.level) {
        out(j, c) = 1.0;
      }
    }
  }
  return out;
}

double psnr(const MeshImage& u, const MeshImage& reference) {
  require_same_shape(u, reference, "psnr");
  const double err = (u.values() - reference.values()).squaredNorm();
  if (err == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(static_cast<double>(u.value_count()) / err);
}

MeshImage clamp_to_unit(const MeshImage& image) {
  if (image.values().array().isNaN().any()) throw NaNInput("clamp_to_unit: image contains NaN");
  return MeshImage(image.values().cwiseMax(0.0).cwiseMin(1.0));
}

}  // namespace meshtv
