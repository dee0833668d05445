#include "meshtv/errors.hpp"
#include "meshtv/imaging.hpp"
#include "meshtv/ply.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace meshtv {

MeshImage read_image_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<double> values;
  int channels = 0;
  int line_no = 0;
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad value");
    if (row.empty()) continue;
    if (channels == 0) channels = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != channels || (channels != 1 && channels != 3)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(channels == 3 ? 3 : 1) + " values per line");
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  if (channels == 0) throw ParseError(path.string() + ": no values");
  const int nv = static_cast<int>(values.size()) / channels;
  MeshImage image(nv, channels);
  for (int j = 0; j < nv; ++j)
    for (int c = 0; c < channels; ++c) image(j, c) = values[static_cast<std::size_t>(j) * channels + c];
  return image;
}

void write_image_text(const std::filesystem::path& path, const MeshImage& image) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  for (int j = 0; j < image.vertex_count(); ++j) {
    for (int c = 0; c < image.channel_count(); ++c) out << (c ? " " : "") << image(j, c);
    out << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

MeshImage read_image_ply(const std::filesystem::path& path) {
  const auto ply = read_ply(path);
  const int nv = static_cast<int>(ply.vertex_count());
  if (ply.property_index("quality")) {
    const auto q = ply.property("quality");
    MeshImage image(nv, 1);
    for (int j = 0; j < nv; ++j) image(j) = q[j];
    return image;
  }
  if (ply.property_index("red") && ply.property_index("green") && ply.property_index("blue")) {
    const std::vector<double> rgb[3] = {ply.property("red"), ply.property("green"), ply.property("blue")};
    MeshImage image(nv, 3);
    for (int j = 0; j < nv; ++j)
      for (int c = 0; c < 3; ++c) image(j, c) = rgb[c][j] / 255.0;
    return image;
  }
  throw ParseError(path.string() + ": no 'quality' or 'red,green,blue' vertex properties");
}

void write_image_ply(const std::filesystem::path& path, const TriangleMesh& mesh, const MeshImage& image) {
  if (image.vertex_count() != mesh.vertex_count())
    throw DimensionMismatch("write_image_ply: image and mesh vertex counts differ");
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const bool gray = image.channel_count() == 1;
  out << "ply\nformat ascii 1.0\n"
      << "element vertex " << mesh.vertex_count() << '\n'
      << "property double x\nproperty double y\nproperty double z\n";
  if (gray) out << "property double quality\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "element face " << mesh.triangle_count() << '\n'
      << "property list uchar int vertex_indices\nend_header\n";
  out << std::setprecision(17);
  auto to_byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  for (int j = 0; j < mesh.vertex_count(); ++j) {
    const auto& p = mesh.vertex(j);
    out << p.x() << ' ' << p.y() << ' ' << p.z();
    if (gray) {
      const int b = to_byte(image(j));
      out << ' ' << image(j) << ' ' << b << ' ' << b << ' ' << b << '\n';
    } else {
      out << ' ' << to_byte(image(j, 0)) << ' ' << to_byte(image(j, 1)) << ' ' << to_byte(image(j, 2)) << '\n';
    }
  }
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

MeshImage load_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".ply" ? read_image_ply(path) : read_image_text(path);
}

}  // namespace meshtv
