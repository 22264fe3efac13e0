#pragma once

#include "semisimp/common.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semisimp {

struct VertexRecord {
  Vec3 position = Vec3::Zero();
  std::optional<Vec2> texcoord;
  std::optional<Vec3> normal;  // unit length when present
};

/// Oriented plane a*x + b*y + c*z + d = 0 with (a,b,c) unit length.
struct Plane {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;

  double signed_distance(const Vec3& x) const { return normal.dot(x) + offset; }

  /// Plane through three points, or nothing when they are (numerically) collinear.
  static std::optional<Plane> through(const Vec3& a, const Vec3& b, const Vec3& c);
  /// Plane with the given (not necessarily normalized) normal through a point.
  static std::optional<Plane> from_point_normal(const Vec3& point, const Vec3& normal);
};

/// Indexed triangle mesh. Values are immutable once built; adjacency is
/// computed on demand through `Adjacency`.
struct Mesh {
  std::vector<VertexRecord> vertices;
  std::vector<Face> faces;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }

  /// Throws Error if a face has repeated or out-of-range corners or two
  /// faces share an unordered vertex triple.
  void check() const;
};

/// Unnormalized face normal (twice the area in length).
Vec3 face_normal(const Vec3& a, const Vec3& b, const Vec3& c);
double face_area(const Mesh& mesh, const Face& f);

/// Vertex -> incident faces and vertex -> sorted neighbor lists.
class Adjacency {
 public:
  explicit Adjacency(const Mesh& mesh);

  std::span<const std::uint32_t> faces_of(VertexId v) const { return vertex_faces_[v]; }
  std::span<const VertexId> neighbors_of(VertexId v) const { return neighbors_[v]; }
  bool is_edge(VertexId a, VertexId b) const;
  /// Number of faces containing edge (a,b).
  std::size_t edge_face_count(VertexId a, VertexId b) const;

 private:
  const Mesh* mesh_;
  std::vector<std::vector<std::uint32_t>> vertex_faces_;
  std::vector<std::vector<VertexId>> neighbors_;
};

/// Breadth-first hop distances over the edge graph, for all vertices within r hops of v.
std::map<VertexId, int> hop_neighborhood(const Mesh& mesh, VertexId v, int r);
std::map<VertexId, int> hop_neighborhood(const Mesh& mesh, const Adjacency& adj, VertexId v, int r);

/// Collapse legality: link condition plus no surviving face normal reversing
/// when u and v merge at `placement` (midpoint when omitted). Throws Error if
/// (u,v) is not an edge.
bool collapse_is_legal(const Mesh& mesh, VertexId u, VertexId v);
bool collapse_is_legal(const Mesh& mesh, VertexId u, VertexId v, const Vec3& placement);

namespace legality {

/// Topological link condition on the faces around u and v, treating boundary
/// loops as coned to a virtual vertex. Faces in `faces_u` must all contain u,
/// faces in `faces_v` must all contain v.
bool link_condition(std::span<const Face> faces_u, std::span<const Face> faces_v, std::uint32_t u,
                    std::uint32_t v);

/// False if any face touching exactly one of u, v has its normal reversed
/// (dot < 0) once that corner moves to `placement`.
template <class PositionOf>
bool normals_preserved(std::span<const Face> faces, std::uint32_t u, std::uint32_t v, const Vec3& placement,
                       PositionOf&& position_of) {
  for (const Face& f : faces) {
    const bool has_u = f[0] == u || f[1] == u || f[2] == u;
    const bool has_v = f[0] == v || f[1] == v || f[2] == v;
    if (has_u && has_v) continue;
    if (!has_u && !has_v) continue;
    std::array<Vec3, 3> before;
    std::array<Vec3, 3> after;
    for (int i = 0; i < 3; ++i) {
      before[i] = position_of(f[i]);
      after[i] = (f[i] == u || f[i] == v) ? placement : before[i];
    }
    const Vec3 n0 = face_normal(before[0], before[1], before[2]);
    const Vec3 n1 = face_normal(after[0], after[1], after[2]);
    if (n0.dot(n1) < 0.0) return false;
  }
  return true;
}

}  // namespace legality

}  // namespace semisimp
