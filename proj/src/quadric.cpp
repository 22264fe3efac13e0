#include "semisimp/quadric.hpp"

#include "semisimp/log.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace semisimp {

namespace {
constexpr double kSingularRelDet = 1e-10;
}

Quadric Quadric::from_plane(const Plane& plane, double weight) {
  const double a = plane.normal.x(), b = plane.normal.y(), c = plane.normal.z(), d = plane.offset;
  return Quadric({weight * a * a, weight * a * b, weight * a * c, weight * a * d, weight * b * b, weight * b * c,
                  weight * b * d, weight * c * c, weight * c * d, weight * d * d});
}

double Quadric::eval(const Vec3& p) const {
  const double x = p.x(), y = p.y(), z = p.z();
  return c_[0] * x * x + 2.0 * c_[1] * x * y + 2.0 * c_[2] * x * z + 2.0 * c_[3] * x + c_[4] * y * y +
         2.0 * c_[5] * y * z + 2.0 * c_[6] * y + c_[7] * z * z + 2.0 * c_[8] * z + c_[9];
}

Quadric& Quadric::operator+=(const Quadric& other) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  return *this;
}

Quadric& Quadric::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Quadric quadric_from_plane(const Plane& plane, double weight) { return Quadric::from_plane(plane, weight); }

Quadric vertex_quadric(const Mesh& mesh, VertexId v, const QuadricConfig& cfg) {
  return vertex_quadric(mesh, Adjacency(mesh), v, cfg);
}

Quadric vertex_quadric(const Mesh& mesh, const Adjacency& adj, VertexId v, const QuadricConfig& cfg) {
  if (v >= mesh.vertices.size()) throw Error("vertex " + std::to_string(v) + " out of range");
  Quadric q;
  for (auto fi : adj.faces_of(v)) {
    const Face& f = mesh.faces[fi];
    const Vec3& a = mesh.vertices[f[0]].position;
    const Vec3& b = mesh.vertices[f[1]].position;
    const Vec3& c = mesh.vertices[f[2]].position;
    const Vec3 n = face_normal(a, b, c);
    const auto plane = Plane::from_point_normal(a, n);
    if (!plane) {
      log().warn("vertex {}: skipping zero-area face {}", v, fi);
      continue;
    }
    q += Quadric::from_plane(*plane, 0.5 * n.norm());

    // Boundary edges at v: (v, next) and (prev, v) of this face that no other face shares.
    int corner = 0;
    while (f[corner] != v) ++corner;
    for (const VertexId other : {f[(corner + 1) % 3], f[(corner + 2) % 3]}) {
      if (adj.edge_face_count(v, other) != 1) continue;
      const Vec3& pv = mesh.vertices[v].position;
      const Vec3& po = mesh.vertices[other].position;
      const Vec3 edge = po - pv;
      const auto constraint = Plane::from_point_normal(pv, edge.cross(n));
      if (!constraint) continue;
      q += Quadric::from_plane(*constraint, cfg.boundary_weight * edge.squaredNorm());
    }
  }
  return q;
}

PlacementResult subset_placement(const Quadric& q, const Vec3& u, const Vec3& v) {
  const Vec3 mid = 0.5 * (u + v);
  PlacementResult best{u, q.eval(u)};
  for (const Vec3* cand : {&v, &mid}) {
    const double e = q.eval(*cand);
    if (e < best.error) best = {*cand, e};
  }
  best.error = std::max(best.error, 0.0);
  return best;
}

PlacementResult optimal_placement(const Quadric& q, const Vec3& u, const Vec3& v) {
  const auto& c = q.coefficients();
  Eigen::Matrix3d a;
  a << c[0], c[1], c[2], c[1], c[4], c[5], c[2], c[5], c[7];
  const Vec3 rhs(-c[3], -c[6], -c[8]);

  const PlacementResult fallback = subset_placement(q, u, v);
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return fallback;
  const double det = a.determinant();
  if (!(std::abs(det) >= kSingularRelDet * scale * scale * scale)) return fallback;

  const Vec3 x = a.inverse() * rhs;
  if (!x.allFinite()) return fallback;
  const double e = q.eval(x);
  if (e > fallback.error) return fallback;
  return {x, std::max(e, 0.0)};
}

PlacementResult place(const Quadric& q, const Vec3& u, const Vec3& v, PlacementPolicy policy) {
  return policy == PlacementPolicy::subset ? subset_placement(q, u, v) : optimal_placement(q, u, v);
}

}  // namespace semisimp
