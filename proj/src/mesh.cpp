#include "semisimp/mesh.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace semisimp {

std::optional<Plane> Plane::through(const Vec3& a, const Vec3& b, const Vec3& c) {
  return from_point_normal(a, face_normal(a, b, c));
}

std::optional<Plane> Plane::from_point_normal(const Vec3& point, const Vec3& normal) {
  const double len = normal.norm();
  if (!(len > 0.0) || !std::isfinite(len)) return std::nullopt;
  Plane p;
  p.normal = normal / len;
  p.offset = -p.normal.dot(point);
  return p;
}

Vec3 face_normal(const Vec3& a, const Vec3& b, const Vec3& c) { return (b - a).cross(c - a); }

double face_area(const Mesh& mesh, const Face& f) {
  return 0.5 * face_normal(mesh.vertices[f[0]].position, mesh.vertices[f[1]].position,
                           mesh.vertices[f[2]].position)
                   .norm();
}

void Mesh::check() const {
  std::set<Face> seen;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    Face f = faces[i];
    for (auto idx : f) {
      if (idx >= vertices.size())
        throw Error("face " + std::to_string(i) + " references vertex " + std::to_string(idx) + " out of range");
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw Error("face " + std::to_string(i) + " has repeated corners");
    std::sort(f.begin(), f.end());
    if (!seen.insert(f).second) throw Error("face " + std::to_string(i) + " duplicates an earlier vertex triple");
  }
}

Adjacency::Adjacency(const Mesh& mesh)
    : mesh_(&mesh), vertex_faces_(mesh.vertices.size()), neighbors_(mesh.vertices.size()) {
  for (std::uint32_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const Face& f = mesh.faces[fi];
    for (int c = 0; c < 3; ++c) {
      vertex_faces_[f[c]].push_back(fi);
      neighbors_[f[c]].push_back(f[(c + 1) % 3]);
      neighbors_[f[c]].push_back(f[(c + 2) % 3]);
    }
  }
  for (auto& n : neighbors_) {
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
  }
}

bool Adjacency::is_edge(VertexId a, VertexId b) const {
  const auto& n = neighbors_.at(a);
  return std::binary_search(n.begin(), n.end(), b);
}

std::size_t Adjacency::edge_face_count(VertexId a, VertexId b) const {
  std::size_t count = 0;
  for (auto fi : vertex_faces_.at(a)) {
    const Face& f = mesh_->faces[fi];
    if (f[0] == b || f[1] == b || f[2] == b) ++count;
  }
  return count;
}

std::map<VertexId, int> hop_neighborhood(const Mesh& mesh, VertexId v, int r) {
  return hop_neighborhood(mesh, Adjacency(mesh), v, r);
}

std::map<VertexId, int> hop_neighborhood(const Mesh& mesh, const Adjacency& adj, VertexId v, int r) {
  if (v >= mesh.vertices.size()) throw Error("vertex " + std::to_string(v) + " out of range");
  if (r < 0) throw Error("hop radius must be nonnegative");
  std::map<VertexId, int> dist{{v, 0}};
  std::deque<VertexId> frontier{v};
  while (!frontier.empty()) {
    const VertexId x = frontier.front();
    frontier.pop_front();
    const int d = dist[x];
    if (d == r) continue;
    for (VertexId y : adj.neighbors_of(x)) {
      if (dist.emplace(y, d + 1).second) frontier.push_back(y);
    }
  }
  return dist;
}

namespace legality {

namespace {

constexpr std::uint32_t kVirtual = 0xffffffffu;

struct Link {
  std::vector<std::uint32_t> vertices;
  std::vector<std::uint64_t> edges;
};

// Link of `center` in the star given by `faces`; boundary edges are closed
// off through the virtual vertex so that open surfaces behave like closed ones.
Link vertex_link(std::span<const Face> faces, std::uint32_t center) {
  Link link;
  std::map<std::uint32_t, int> spoke_count;
  for (const Face& f : faces) {
    int c = 0;
    while (c < 3 && f[c] != center) ++c;
    if (c == 3) continue;
    const std::uint32_t x = f[(c + 1) % 3];
    const std::uint32_t y = f[(c + 2) % 3];
    ++spoke_count[x];
    ++spoke_count[y];
    link.edges.push_back(edge_key(x, y));
  }
  bool on_boundary = false;
  for (auto [x, count] : spoke_count) {
    link.vertices.push_back(x);
    if (count == 1) {
      on_boundary = true;
      link.edges.push_back(edge_key(x, kVirtual));
    }
  }
  if (on_boundary) link.vertices.push_back(kVirtual);
  std::sort(link.vertices.begin(), link.vertices.end());
  std::sort(link.edges.begin(), link.edges.end());
  link.edges.erase(std::unique(link.edges.begin(), link.edges.end()), link.edges.end());
  return link;
}

}  // namespace

bool link_condition(std::span<const Face> faces_u, std::span<const Face> faces_v, std::uint32_t u,
                    std::uint32_t v) {
  const Link lu = vertex_link(faces_u, u);
  const Link lv = vertex_link(faces_v, v);

  std::vector<std::uint32_t> common;
  std::set_intersection(lu.vertices.begin(), lu.vertices.end(), lv.vertices.begin(), lv.vertices.end(),
                        std::back_inserter(common));

  std::vector<std::uint32_t> edge_link;
  std::size_t edge_faces = 0;
  for (const Face& f : faces_u) {
    const bool has_v = f[0] == v || f[1] == v || f[2] == v;
    if (!has_v) continue;
    ++edge_faces;
    for (auto c : f)
      if (c != u && c != v) edge_link.push_back(c);
  }
  if (edge_faces == 1) edge_link.push_back(kVirtual);
  std::sort(edge_link.begin(), edge_link.end());
  edge_link.erase(std::unique(edge_link.begin(), edge_link.end()), edge_link.end());
  if (common != edge_link) return false;

  std::vector<std::uint64_t> shared_edges;
  std::set_intersection(lu.edges.begin(), lu.edges.end(), lv.edges.begin(), lv.edges.end(),
                        std::back_inserter(shared_edges));
  return shared_edges.empty();
}

}  // namespace legality

bool collapse_is_legal(const Mesh& mesh, VertexId u, VertexId v) {
  if (u >= mesh.vertices.size() || v >= mesh.vertices.size()) throw Error("collapse endpoint out of range");
  return collapse_is_legal(mesh, u, v, 0.5 * (mesh.vertices[u].position + mesh.vertices[v].position));
}

bool collapse_is_legal(const Mesh& mesh, VertexId u, VertexId v, const Vec3& placement) {
  if (u >= mesh.vertices.size() || v >= mesh.vertices.size()) throw Error("collapse endpoint out of range");
  std::vector<Face> faces_u;
  std::vector<Face> faces_v;
  std::vector<Face> star;
  bool is_edge = false;
  for (const Face& f : mesh.faces) {
    const bool has_u = f[0] == u || f[1] == u || f[2] == u;
    const bool has_v = f[0] == v || f[1] == v || f[2] == v;
    if (has_u) faces_u.push_back(f);
    if (has_v) faces_v.push_back(f);
    if (has_u || has_v) star.push_back(f);
    is_edge = is_edge || (has_u && has_v);
  }
  if (!is_edge || u == v)
    throw Error("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
  if (!legality::link_condition(faces_u, faces_v, u, v)) return false;
  return legality::normals_preserved(star, u, v, placement,
                                     [&](std::uint32_t i) -> const Vec3& { return mesh.vertices[i].position; });
}

}  // namespace semisimp
