#include "semisimp/obj_io.hpp"

#include "semisimp/log.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace semisimp {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view tok, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "malformed number '" + std::string(tok) + "'");
  return value;
}

// Resolves a 1-based (or negative, relative) OBJ index against `count` entries.
std::uint32_t resolve_index(std::string_view tok, std::size_t count, std::size_t line, const char* what) {
  long long idx = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("malformed ") + what + " index '" + std::string(tok) + "'");
  if (idx < 0) idx = static_cast<long long>(count) + idx + 1;
  if (idx < 1 || idx > static_cast<long long>(count))
    throw ParseError(line, std::string(what) + " index " + std::string(tok) + " out of range");
  return static_cast<std::uint32_t>(idx - 1);
}

constexpr std::uint32_t kNone = 0xffffffffu;

struct Corner {
  std::uint32_t position = kNone;
  std::uint32_t texcoord = kNone;
  std::uint32_t normal = kNone;
};

Corner parse_corner(std::string_view tok, std::size_t line, std::size_t nv, std::size_t nt, std::size_t nn) {
  Corner c;
  const auto s1 = tok.find('/');
  if (s1 == std::string_view::npos) {
    c.position = resolve_index(tok, nv, line, "vertex");
    return c;
  }
  c.position = resolve_index(tok.substr(0, s1), nv, line, "vertex");
  auto rest = tok.substr(s1 + 1);
  const auto s2 = rest.find('/');
  const auto t = rest.substr(0, s2);
  if (!t.empty()) c.texcoord = resolve_index(t, nt, line, "texcoord");
  if (s2 != std::string_view::npos) {
    const auto n = rest.substr(s2 + 1);
    if (!n.empty()) c.normal = resolve_index(n, nn, line, "normal");
  }
  return c;
}

}  // namespace

Mesh load_obj(std::string_view text) {
  std::vector<Vec3> positions;
  std::vector<Vec2> texcoords;
  std::vector<Vec3> normals;
  std::vector<std::pair<std::vector<Corner>, std::size_t>> polygons;
  std::set<std::string> warned;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "v") {
      if (tok.size() < 4) throw ParseError(line_no, "vertex needs 3 coordinates");
      positions.emplace_back(parse_real(tok[1], line_no), parse_real(tok[2], line_no), parse_real(tok[3], line_no));
    } else if (tok[0] == "vt") {
      if (tok.size() < 3) throw ParseError(line_no, "texcoord needs 2 coordinates");
      texcoords.emplace_back(parse_real(tok[1], line_no), parse_real(tok[2], line_no));
    } else if (tok[0] == "vn") {
      if (tok.size() < 4) throw ParseError(line_no, "normal needs 3 coordinates");
      normals.emplace_back(parse_real(tok[1], line_no), parse_real(tok[2], line_no), parse_real(tok[3], line_no));
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw ParseError(line_no, "face needs at least 3 corners");
      std::vector<Corner> corners;
      for (std::size_t i = 1; i < tok.size(); ++i)
        corners.push_back(parse_corner(tok[i], line_no, positions.size(), texcoords.size(), normals.size()));
      polygons.emplace_back(std::move(corners), line_no);
    } else if (warned.insert(std::string(tok[0])).second) {
      log().warn("obj: ignoring '{}' records", tok[0]);
    }
    if (eol == text.size()) break;
  }

  Mesh mesh;
  mesh.vertices.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) mesh.vertices[i].position = positions[i];

  // First corner to reference a position decides its attributes; a corner that
  // disagrees gets its own copy of the vertex.
  std::vector<std::optional<std::pair<std::uint32_t, std::uint32_t>>> assigned(positions.size());
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, VertexId> duplicates;
  auto set_attributes = [&](VertexRecord& rec, const Corner& c) {
    if (c.texcoord != kNone) rec.texcoord = texcoords[c.texcoord];
    if (c.normal != kNone) {
      const Vec3 n = normals[c.normal];
      if (n.norm() > 0.0) rec.normal = n.normalized();
    }
  };
  auto weld = [&](const Corner& c) -> VertexId {
    const std::pair attrs{c.texcoord, c.normal};
    auto& slot = assigned[c.position];
    if (!slot) {
      slot = attrs;
      set_attributes(mesh.vertices[c.position], c);
      return c.position;
    }
    if (*slot == attrs) return c.position;
    const auto key = std::tuple{c.position, c.texcoord, c.normal};
    if (auto it = duplicates.find(key); it != duplicates.end()) return it->second;
    VertexRecord rec;
    rec.position = positions[c.position];
    set_attributes(rec, c);
    const auto id = static_cast<VertexId>(mesh.vertices.size());
    mesh.vertices.push_back(rec);
    duplicates.emplace(key, id);
    return id;
  };

  std::set<Face> seen;
  std::size_t dropped_degenerate = 0;
  std::size_t dropped_duplicate = 0;
  for (const auto& [corners, line] : polygons) {
    std::vector<VertexId> ids;
    ids.reserve(corners.size());
    for (const auto& c : corners) ids.push_back(weld(c));
    for (std::size_t j = 1; j + 1 < corners.size(); ++j) {
      const auto p0 = corners[0].position, p1 = corners[j].position, p2 = corners[j + 1].position;
      if (p0 == p1 || p1 == p2 || p0 == p2) {
        ++dropped_degenerate;
        continue;
      }
      Face f{ids[0], ids[j], ids[j + 1]};
      Face sorted = f;
      std::sort(sorted.begin(), sorted.end());
      if (!seen.insert(sorted).second) {
        ++dropped_duplicate;
        continue;
      }
      mesh.faces.push_back(f);
    }
  }
  if (dropped_degenerate) log().warn("obj: dropped {} degenerate triangles", dropped_degenerate);
  if (dropped_duplicate) log().warn("obj: dropped {} duplicate triangles", dropped_duplicate);
  return mesh;
}

std::string save_obj(const Mesh& mesh) {
  const bool all_tex = !mesh.vertices.empty() &&
                       std::all_of(mesh.vertices.begin(), mesh.vertices.end(), [](auto& v) { return v.texcoord.has_value(); });
  const bool all_nrm = !mesh.vertices.empty() &&
                       std::all_of(mesh.vertices.begin(), mesh.vertices.end(), [](auto& v) { return v.normal.has_value(); });
  std::string out;
  out.reserve(mesh.vertices.size() * 64 + mesh.faces.size() * 24);
  char buf[160];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.position.x(), v.position.y(), v.position.z());
    out += buf;
  }
  if (all_tex) {
    for (const auto& v : mesh.vertices) {
      std::snprintf(buf, sizeof buf, "vt %.17g %.17g\n", v.texcoord->x(), v.texcoord->y());
      out += buf;
    }
  }
  if (all_nrm) {
    for (const auto& v : mesh.vertices) {
      std::snprintf(buf, sizeof buf, "vn %.17g %.17g %.17g\n", v.normal->x(), v.normal->y(), v.normal->z());
      out += buf;
    }
  }
  for (const auto& f : mesh.faces) {
    out += 'f';
    for (auto idx : f) {
      const auto i = idx + 1;
      if (all_tex && all_nrm)
        std::snprintf(buf, sizeof buf, " %u/%u/%u", i, i, i);
      else if (all_tex)
        std::snprintf(buf, sizeof buf, " %u/%u", i, i);
      else if (all_nrm)
        std::snprintf(buf, sizeof buf, " %u//%u", i, i);
      else
        std::snprintf(buf, sizeof buf, " %u", i);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path.string());
}

Mesh read_obj_file(const std::filesystem::path& path) { return load_obj(read_text_file(path)); }

}  // namespace semisimp
