#include "meshtv/ply.hpp"

#include "meshtv/errors.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace meshtv {
namespace {

struct ElementDecl {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> scalar_props;
  bool has_list = false;
  std::string list_name;
};

std::string next_line(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": unexpected end of PLY file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::size_t PlyContents::vertex_count() const {
  return vertex_property_names.empty() ? 0 : vertex_values.size() / vertex_property_names.size();
}

std::optional<std::size_t> PlyContents::property_index(const std::string& name) const {
  for (std::size_t i = 0; i < vertex_property_names.size(); ++i)
    if (vertex_property_names[i] == name) return i;
  return std::nullopt;
}

std::vector<double> PlyContents::property(const std::string& name) const {
  const auto idx = property_index(name);
  if (!idx) throw ParseError("PLY vertex property '" + name + "' not found");
  const std::size_t stride = vertex_property_names.size();
  std::vector<double> out(vertex_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = vertex_values[v * stride + *idx];
  return out;
}

PlyContents read_ply(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  if (next_line(in, path) != "ply") throw ParseError(path.string() + ": missing 'ply' magic");

  std::vector<ElementDecl> elements;
  bool ascii = false;
  for (;;) {
    std::istringstream ls(next_line(in, path));
    std::string keyword;
    ls >> keyword;
    if (keyword == "end_header") break;
    if (keyword == "format") {
      std::string kind;
      ls >> kind;
      if (kind != "ascii") throw ParseError(path.string() + ": only ASCII PLY is supported");
      ascii = true;
    } else if (keyword == "element") {
      ElementDecl decl;
      if (!(ls >> decl.name >> decl.count))
        throw ParseError(path.string() + ": malformed element declaration");
      elements.push_back(std::move(decl));
    } else if (keyword == "property") {
      if (elements.empty()) throw ParseError(path.string() + ": property before element");
      std::string type;
      ls >> type;
      auto& decl = elements.back();
      if (type == "list") {
        std::string count_type, item_type, name;
        if (!(ls >> count_type >> item_type >> name))
          throw ParseError(path.string() + ": malformed list property");
        if (decl.has_list) throw ParseError(path.string() + ": multiple list properties unsupported");
        decl.has_list = true;
        decl.list_name = name;
      } else {
        std::string name;
        if (!(ls >> name)) throw ParseError(path.string() + ": malformed property");
        if (decl.has_list) throw ParseError(path.string() + ": scalar property after list unsupported");
        decl.scalar_props.push_back(name);
      }
    } else if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) {
      continue;
    } else {
      throw ParseError(path.string() + ": unknown header keyword '" + keyword + "'");
    }
  }
  if (!ascii) throw ParseError(path.string() + ": missing format line");

  PlyContents out;
  for (const auto& decl : elements) {
    const bool is_vertex = decl.name == "vertex";
    const bool is_face = decl.name == "face";
    if (is_vertex) {
      if (decl.has_list) throw ParseError(path.string() + ": list property on vertex element");
      out.vertex_property_names = decl.scalar_props;
      out.vertex_values.reserve(decl.count * decl.scalar_props.size());
    }
    for (std::size_t row = 0; row < decl.count; ++row) {
      std::istringstream ls(next_line(in, path));
      for (std::size_t k = 0; k < decl.scalar_props.size(); ++k) {
        double value;
        if (!(ls >> value)) throw ParseError(path.string() + ": malformed " + decl.name + " row");
        if (is_vertex) out.vertex_values.push_back(value);
      }
      if (decl.has_list) {
        long n;
        if (!(ls >> n) || n < 0) throw ParseError(path.string() + ": malformed list length");
        std::vector<int> items(static_cast<std::size_t>(n));
        for (auto& item : items) {
          long long value;
          if (!(ls >> value)) throw ParseError(path.string() + ": malformed list entry");
          // Out-of-range values are mapped to -1 and rejected by mesh validation.
          item = (value < 0 || value > std::numeric_limits<int>::max()) ? -1 : static_cast<int>(value);
        }
        if (is_face) out.faces.push_back(std::move(items));
      }
    }
  }
  return out;
}

}  // namespace meshtv
