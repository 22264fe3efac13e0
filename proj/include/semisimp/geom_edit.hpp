#pragma once

#include "semisimp/hierarchy.hpp"

#include <array>
#include <vector>

namespace semisimp {

/// Cubic Bezier over hop distance [0, r] with pinned ends B(0)=1, B(r)=0 and
/// two free ordinates at r/3 and 2r/3. Defaults give a smoothstep profile.
struct FalloffCurve {
  double first = 1.0;
  double second = 0.0;
};

enum class DescendantMode { off, direct, attenuated };

struct EditOptions {
  int radius = 0;
  FalloffCurve falloff;
  bool ancestors = false;
  DescendantMode descendants = DescendantMode::off;
};

struct LocalFrame {
  Vec3 origin = Vec3::Zero();
  Vec3 x = Vec3::UnitX();
  Vec3 y = Vec3::UnitY();
  Vec3 z = Vec3::UnitZ();

  Vec3 to_local(const Vec3& p) const;
  Vec3 to_global(const Vec3& detail) const;
};

/// B(i) for hop distance i; 0 outside [0, r]. Values are clamped to [-0.25, 1.25].
double falloff_weight(const FalloffCurve& curve, int i, int r);

/// Frame at cut node m: z averages the unit normals of m's cut faces; y is the
/// edge to m's lowest-id cut neighbor projected off z; x = y cross z.
/// Degenerate normals fall back to the first non-degenerate face normal, then
/// +Z; a degenerate edge falls back to the coordinate axis most orthogonal to z.
LocalFrame local_frame(const CutMesh& cut_mesh, const Adjacency& adj, NodeId m);
LocalFrame local_frame(const Hierarchy& h, const Cut& cut, NodeId m);

/// sqrt(eps_c / eps_m) clamped to [0, 1]; 0 when eps_m is 0. Throws on negative input.
double attenuation_factor(double eps_c, double eps_m);

/// Previous state of every node an edit touched; enough to undo it exactly.
struct EditRecord {
  struct Saved {
    NodeId id;
    Vec3 position;
    double error;
    Quadric quadric;
  };
  std::vector<Saved> saved;
  std::vector<NodeId> moved_cut_nodes;
  std::vector<NodeId> moved_descendants;
  std::vector<NodeId> updated_ancestors;
};

/// Moves cut node m by `delta` and propagates the change to cut neighbors
/// within opts.radius (scaled by the falloff), to descendants of every moved
/// node through its local frame (direct or attenuated), and to ancestors by
/// re-summing quadrics bottom-up and re-placing each ancestor once.
EditRecord apply_vertex_edit(Hierarchy& h, const OrderList& order, LodPosition lod, NodeId m, const Vec3& delta,
                             const EditOptions& opts, const QuadricConfig& cfg = QuadricConfig{});

void undo_vertex_edit(Hierarchy& h, const EditRecord& record);

}  // namespace semisimp
