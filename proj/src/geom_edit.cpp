#include "semisimp/geom_edit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace semisimp {

Vec3 LocalFrame::to_local(const Vec3& p) const {
  const Vec3 d = p - origin;
  return {x.dot(d), y.dot(d), z.dot(d)};
}

Vec3 LocalFrame::to_global(const Vec3& detail) const {
  return origin + detail.x() * x + detail.y() * y + detail.z() * z;
}

double falloff_weight(const FalloffCurve& curve, int i, int r) {
  if (i < 0) throw Error("hop distance must be nonnegative");
  if (i > r) return 0.0;
  if (r == 0) return 1.0;
  const double t = static_cast<double>(i) / r;
  const double s = 1.0 - t;
  const double b = s * s * s + 3.0 * s * s * t * curve.first + 3.0 * s * t * t * curve.second;
  return std::clamp(b, -0.25, 1.25);
}

LocalFrame local_frame(const CutMesh& cm, const Adjacency& adj, NodeId m) {
  const auto vm = cm.vertex_of(m);
  if (!vm) throw Error("node " + std::to_string(m) + " is not in the cut");
  const auto& verts = cm.mesh.vertices;
  LocalFrame frame;
  frame.origin = verts[*vm].position;

  Vec3 normal_sum = Vec3::Zero();
  std::optional<Vec3> first_normal;
  for (auto fi : adj.faces_of(*vm)) {
    const Face& f = cm.mesh.faces[fi];
    const Vec3 n = face_normal(verts[f[0]].position, verts[f[1]].position, verts[f[2]].position);
    const double len = n.norm();
    if (!(len > 0.0)) continue;
    normal_sum += n / len;
    if (!first_normal) first_normal = n / len;
  }
  if (normal_sum.norm() > 1e-12)
    frame.z = normal_sum.normalized();
  else if (first_normal)
    frame.z = *first_normal;
  else
    frame.z = Vec3::UnitZ();

  Vec3 y = Vec3::Zero();
  const auto nbrs = adj.neighbors_of(*vm);
  if (!nbrs.empty()) {
    const Vec3 e = verts[nbrs.front()].position - frame.origin;
    y = e - e.dot(frame.z) * frame.z;
    if (!(y.norm() > 1e-12 * std::max(1.0, e.norm()))) y = Vec3::Zero();
  }
  if (y.isZero()) {
    int axis = 0;
    frame.z.cwiseAbs().minCoeff(&axis);
    const Vec3 e = Vec3::Unit(axis);
    y = e - e.dot(frame.z) * frame.z;
  }
  frame.y = y.normalized();
  frame.x = frame.y.cross(frame.z).normalized();
  return frame;
}

LocalFrame local_frame(const Hierarchy& h, const Cut& cut, NodeId m) {
  const CutMesh cm = extract_mesh(h, cut);
  return local_frame(cm, Adjacency(cm.mesh), m);
}

double attenuation_factor(double eps_c, double eps_m) {
  if (!(eps_c >= 0.0) || !(eps_m >= 0.0)) throw Error("attenuation needs nonnegative errors");
  if (eps_m == 0.0) return 0.0;
  return std::min(1.0, std::sqrt(eps_c / eps_m));
}

EditRecord apply_vertex_edit(Hierarchy& h, const OrderList& order, LodPosition lod, NodeId m, const Vec3& delta,
                             const EditOptions& opts, const QuadricConfig& cfg) {
  if (opts.radius < 0) throw Error("edit radius must be nonnegative");
  const Cut cut = cut_at(h, order, lod);
  if (!cut.contains(m)) throw Error("node " + std::to_string(m) + " is not in the cut at LOD " + std::to_string(lod));
  const bool attenuated = opts.descendants == DescendantMode::attenuated;
  if (attenuated && h.nodes[m].is_leaf())
    throw Error("node " + std::to_string(m) + " is an original vertex; attenuated edits keep the original model fixed");

  CutMesh cm = extract_mesh(h, cut);
  const Adjacency adj(cm.mesh);
  const VertexId vm = *cm.vertex_of(m);

  std::map<NodeId, EditRecord::Saved> saved;
  auto save = [&](NodeId id) {
    const Node& n = h.nodes[id];
    saved.try_emplace(id, EditRecord::Saved{id, n.position, n.error, n.quadric});
  };

  // Neighbor phase: displacement per cut vertex, ascending node id.
  std::vector<std::pair<VertexId, Vec3>> moves;
  for (const auto& [v, dist] : hop_neighborhood(cm.mesh, adj, vm, opts.radius)) {
    const double w = v == vm ? 1.0 : falloff_weight(opts.falloff, dist, opts.radius);
    if (w == 0.0) continue;
    // With attenuation the original model is fixed, so cut leaves stay put.
    if (attenuated && h.nodes[cm.nodes[v]].is_leaf()) continue;
    const Vec3 d = w * delta;
    if (d.isZero(0.0)) continue;
    moves.emplace_back(v, d);
  }

  EditRecord record;
  const bool descend = opts.descendants != DescendantMode::off;
  struct Detail {
    NodeId node;
    Vec3 coords;
  };
  std::vector<std::vector<Detail>> details(moves.size());
  if (descend) {
    for (std::size_t i = 0; i < moves.size(); ++i) {
      const NodeId n = cm.nodes[moves[i].first];
      if (h.nodes[n].is_leaf()) continue;
      const LocalFrame before = local_frame(cm, adj, n);
      for (auto d : h.descendants(n)) details[i].push_back({d, before.to_local(h.nodes[d].position)});
    }
  }

  for (const auto& [v, d] : moves) {
    const NodeId n = cm.nodes[v];
    save(n);
    h.nodes[n].position += d;
    cm.mesh.vertices[v].position = h.nodes[n].position;
    record.moved_cut_nodes.push_back(n);
  }

  if (descend) {
    for (std::size_t i = 0; i < moves.size(); ++i) {
      if (details[i].empty()) continue;
      const NodeId n = cm.nodes[moves[i].first];
      const LocalFrame after = local_frame(cm, adj, n);
      for (const auto& [d, coords] : details[i]) {
        Node& node = h.nodes[d];
        const Vec3 target = after.to_global(coords);
        double t = 1.0;
        if (attenuated) {
          t = attenuation_factor(node.error, h.nodes[n].error);
          if (t == 0.0) continue;
        }
        save(d);
        node.position = t == 1.0 ? target : Vec3(node.position + t * (target - node.position));
        record.moved_descendants.push_back(d);
      }
    }
  }

  if (opts.ancestors && !moves.empty()) {
    std::vector<NodeId> ancestors;
    for (const auto& [v, d] : moves) {
      const NodeId n = cm.nodes[v];
      save(n);
      h.nodes[n].quadric = vertex_quadric(cm.mesh, adj, v, cfg);
      for (auto a : h.ancestors(n)) ancestors.push_back(a);
    }
    std::sort(ancestors.begin(), ancestors.end());
    ancestors.erase(std::unique(ancestors.begin(), ancestors.end()), ancestors.end());
    const auto pos = order_positions(h, order);
    std::sort(ancestors.begin(), ancestors.end(), [&](NodeId a, NodeId b) { return pos[a] < pos[b]; });
    for (auto a : ancestors) {
      save(a);
      Node& node = h.nodes[a];
      const Node& c0 = h.nodes[node.children[0]];
      const Node& c1 = h.nodes[node.children[1]];
      node.quadric = c0.quadric + c1.quadric;
      const PlacementResult r = place(node.quadric, c0.position, c1.position, cfg.placement);
      node.position = r.position;
      node.error = r.error;
      record.updated_ancestors.push_back(a);
    }
  }

  record.saved.reserve(saved.size());
  for (auto& [id, s] : saved) record.saved.push_back(s);
  return record;
}

void undo_vertex_edit(Hierarchy& h, const EditRecord& record) {
  for (auto it = record.saved.rbegin(); it != record.saved.rend(); ++it) {
    Node& n = h.nodes.at(it->id);
    n.position = it->position;
    n.error = it->error;
    n.quadric = it->quadric;
  }
}

}  // namespace semisimp
