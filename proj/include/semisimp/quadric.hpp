#pragma once

#include "semisimp/mesh.hpp"

#include <array>

namespace semisimp {

/// Symmetric 4x4 quadratic form stored as its 10 distinct coefficients,
/// evaluated at the homogeneous point (x, y, z, 1).
class Quadric {
 public:
  // Coefficient order: xx xy xz xw yy yz yw zz zw ww.
  using Coefficients = std::array<double, 10>;

  Quadric() = default;
  explicit Quadric(const Coefficients& c) : c_(c) {}

  /// w * p p^T for the plane coefficient vector p = (a, b, c, d).
  static Quadric from_plane(const Plane& plane, double weight);

  double eval(const Vec3& x) const;

  const Coefficients& coefficients() const { return c_; }

  Quadric& operator+=(const Quadric& other);
  Quadric& operator*=(double s);
  friend Quadric operator+(Quadric a, const Quadric& b) { return a += b; }
  friend Quadric operator*(Quadric a, double s) { return a *= s; }
  friend bool operator==(const Quadric& a, const Quadric& b) { return a.c_ == b.c_; }

 private:
  Coefficients c_{};
};

enum class PlacementPolicy {
  optimal,  // minimize over all of R^3, falling back to the subset on singular systems
  subset,   // best of the two endpoints and their midpoint
};

struct QuadricConfig {
  double boundary_weight = 1000.0;
  PlacementPolicy placement = PlacementPolicy::optimal;
};

struct PlacementResult {
  Vec3 position;
  double error = 0.0;  // clamped to >= 0
};

Quadric quadric_from_plane(const Plane& plane, double weight);
inline double eval(const Quadric& q, const Vec3& x) { return q.eval(x); }

/// Area-weighted sum of incident face planes, plus for every incident
/// boundary edge a plane through the edge perpendicular to its face,
/// weighted by boundary_weight * length^2.
Quadric vertex_quadric(const Mesh& mesh, VertexId v, const QuadricConfig& cfg);
Quadric vertex_quadric(const Mesh& mesh, const Adjacency& adj, VertexId v, const QuadricConfig& cfg);

/// Minimizer of q for merging u and v. Near-singular systems (relative
/// determinant below 1e-10) fall back to the best of {u, v, (u+v)/2}; the
/// result is never worse than any of those three.
PlacementResult optimal_placement(const Quadric& q, const Vec3& u, const Vec3& v);
PlacementResult subset_placement(const Quadric& q, const Vec3& u, const Vec3& v);
PlacementResult place(const Quadric& q, const Vec3& u, const Vec3& v, PlacementPolicy policy);

}  // namespace semisimp
