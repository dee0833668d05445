#include "meshtv/errors.hpp"
#include "meshtv/mesh.hpp"
#include "meshtv/ply.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace meshtv {
namespace {

// Whitespace tokenizer that drops '#' comments.
class TokenStream {
 public:
  TokenStream(std::istream& in, std::filesystem::path path) : in_(in), path_(std::move(path)) {}

  bool next(std::string& token) {
    for (;;) {
      if (line_ >> token) {
        if (token[0] == '#') {
          line_.clear();
          line_.str({});
          continue;
        }
        return true;
      }
      std::string raw;
      if (!std::getline(in_, raw)) return false;
      line_.clear();
      line_.str(raw);
    }
  }

  template <class T>
  T read(const char* what) {
    std::string token;
    if (!next(token)) fail(std::string("unexpected end of file reading ") + what);
    std::istringstream ss(token);
    T value;
    if (!(ss >> value) || !ss.eof()) fail(std::string("bad ") + what + " '" + token + "'");
    return value;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(path_.string() + ": " + msg); }

 private:
  std::istream& in_;
  std::filesystem::path path_;
  std::istringstream line_;
};

int to_index(long long value) {
  if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) return -1;
  return static_cast<int>(value);
}

TriangleMesh load_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  TokenStream tokens(in, path);
  std::string magic;
  if (!tokens.next(magic) || magic != "OFF") tokens.fail("missing OFF header");
  const auto nv = tokens.read<long long>("vertex count");
  const auto nf = tokens.read<long long>("face count");
  tokens.read<long long>("edge count");
  if (nv < 0 || nf < 0) tokens.fail("negative element count");

  std::vector<Vec3> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices) {
    v.x() = tokens.read<double>("vertex coordinate");
    v.y() = tokens.read<double>("vertex coordinate");
    v.z() = tokens.read<double>("vertex coordinate");
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nf));
  for (auto& t : triangles) {
    const auto n = tokens.read<long long>("face size");
    if (n != 3) tokens.fail("only triangular faces are supported (got " + std::to_string(n) + ")");
    for (auto& idx : t) idx = to_index(tokens.read<long long>("face index"));
  }
  return TriangleMesh(std::move(vertices), std::move(triangles));
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream ls(raw);
    std::string keyword;
    if (!(ls >> keyword) || keyword[0] == '#') continue;
    if (keyword == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z())) fail("malformed vertex");
      vertices.push_back(v);
    } else if (keyword == "f") {
      std::vector<int> face;
      std::string token;
      while (ls >> token) {
        // "i", "i/t", "i//n" or "i/t/n"; only the position index matters.
        const auto slash = token.find('/');
        long long value;
        try {
          std::size_t used = 0;
          const std::string head = token.substr(0, slash);
          value = std::stoll(head, &used);
          if (used != head.size()) fail("bad face index '" + token + "'");
        } catch (const std::logic_error&) {
          fail("bad face index '" + token + "'");
        }
        if (value == 0) throw IndexOutOfRange(path.string() + ": OBJ face index 0 is invalid");
        // 1-based, negative values count back from the latest vertex.
        const long long zero_based =
            value > 0 ? value - 1 : static_cast<long long>(vertices.size()) + value;
        face.push_back(to_index(zero_based));
      }
      if (face.size() != 3)
        fail("only triangular faces are supported (got " + std::to_string(face.size()) + ")");
      triangles.push_back({face[0], face[1], face[2]});
    }
  }
  return TriangleMesh(std::move(vertices), std::move(triangles));
}

TriangleMesh load_ply_mesh(const std::filesystem::path& path) {
  const auto ply = read_ply(path);
  const auto xs = ply.property("x");
  const auto ys = ply.property("y");
  const auto zs = ply.property("z");
  std::vector<Vec3> vertices(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vertices[i] = Vec3(xs[i], ys[i], zs[i]);
  std::vector<Triangle> triangles;
  triangles.reserve(ply.faces.size());
  for (const auto& f : ply.faces) {
    if (f.size() != 3)
      throw ParseError(path.string() + ": only triangular faces are supported");
    triangles.push_back({f[0], f[1], f[2]});
  }
  return TriangleMesh(std::move(vertices), std::move(triangles));
}

}  // namespace

MeshFormat format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".off") return MeshFormat::Off;
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".ply") return MeshFormat::Ply;
  throw ParseError("unrecognized mesh extension '" + ext + "'");
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  switch (format) {
    case MeshFormat::Off: return load_off(path);
    case MeshFormat::Obj: return load_obj(path);
    case MeshFormat::Ply: return load_ply_mesh(path);
  }
  throw ParseError("unknown mesh format");
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  return load_mesh(path, format_from_extension(path));
}

void save_mesh(const std::filesystem::path& path, const TriangleMesh& mesh, MeshFormat format) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  switch (format) {
    case MeshFormat::Off:
      out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
      for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
      for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
      break;
    case MeshFormat::Obj:
      for (const auto& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
      for (const auto& t : mesh.triangles())
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
      break;
    case MeshFormat::Ply:
      out << "ply\nformat ascii 1.0\n"
          << "element vertex " << mesh.vertex_count() << '\n'
          << "property double x\nproperty double y\nproperty double z\n"
          << "element face " << mesh.triangle_count() << '\n'
          << "property list uchar int vertex_indices\nend_header\n";
      for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
      for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
      break;
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace meshtv
