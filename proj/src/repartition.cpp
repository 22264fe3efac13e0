#include "semisimp/repartition.hpp"

#include "semisimp/log.hpp"

#include <algorithm>
#include <numeric>

namespace semisimp {

bool Patch::contains(NodeId id) const { return std::binary_search(nodes.begin(), nodes.end(), id); }

Patch define_patch(const Hierarchy& h, const OrderList& order, LodPosition pos, std::span<const NodeId> selection) {
  if (selection.empty()) throw Error("a patch needs at least one node");
  const Cut cut = cut_at(h, order, pos);
  Patch patch;
  patch.nodes.assign(selection.begin(), selection.end());
  std::sort(patch.nodes.begin(), patch.nodes.end());
  patch.nodes.erase(std::unique(patch.nodes.begin(), patch.nodes.end()), patch.nodes.end());
  for (auto id : patch.nodes) {
    if (!cut.contains(id)) throw Error("node " + std::to_string(id) + " is not in the cut at LOD " + std::to_string(pos));
  }

  const CutMesh cm = extract_mesh(h, cut);
  const Adjacency adj(cm.mesh);
  std::vector<int> component(cm.nodes.size(), -1);
  std::vector<std::vector<NodeId>> components;
  for (auto id : patch.nodes) {
    const VertexId start = *cm.vertex_of(id);
    if (component[start] >= 0) continue;
    const int c = static_cast<int>(components.size());
    components.emplace_back();
    std::vector<VertexId> stack{start};
    component[start] = c;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      components.back().push_back(cm.nodes[v]);
      for (auto w : adj.neighbors_of(v)) {
        if (component[w] < 0 && patch.contains(cm.nodes[w])) {
          component[w] = c;
          stack.push_back(w);
        }
      }
    }
  }
  if (components.size() > 1) {
    std::string msg = "patch selection is not edge-connected; components:";
    for (auto& comp : components) {
      std::sort(comp.begin(), comp.end());
      msg += " {";
      for (std::size_t i = 0; i < comp.size(); ++i) msg += (i ? "," : "") + std::to_string(comp[i]);
      msg += "}";
    }
    throw Error(msg);
  }

  for (auto id : patch.nodes) {
    const VertexId v = *cm.vertex_of(id);
    for (auto w : adj.neighbors_of(v))
      if (!patch.contains(cm.nodes[w])) patch.boundary.emplace_back(id, cm.nodes[w]);
  }
  std::sort(patch.boundary.begin(), patch.boundary.end());
  return patch;
}

Resimplified resimplify_segmented(const Hierarchy& h, const OrderList& order, LodPosition pos, const Patch& patch,
                                  const QuadricConfig& cfg, const Progress& progress) {
  const Cut cut = cut_at(h, order, pos);
  if (patch.nodes.empty()) throw Error("empty patch");
  for (auto id : patch.nodes) {
    if (!cut.contains(id)) throw Error("patch node " + std::to_string(id) + " is not in the cut at LOD " + std::to_string(pos));
  }
  const CutMesh cm = extract_mesh(h, cut);

  // Nodes above the cut become inert placeholders; their ids are reused later.
  Hierarchy base = h;
  std::vector<bool> above(h.size(), false);
  for (std::size_t x = pos; x < order.size(); ++x) above[order[x]] = true;
  std::vector<NodeId> freed;
  for (NodeId id = 0; id < h.size(); ++id) {
    if (!above[id]) continue;
    freed.push_back(id);
    base.nodes[id] = Node{};
  }
  for (auto id : cut.nodes) base.nodes[id].parent.reset();

  std::vector<Face> cut_faces;
  cut_faces.reserve(cm.mesh.faces.size());
  for (const Face& f : cm.mesh.faces) cut_faces.push_back({cm.nodes[f[0]], cm.nodes[f[1]], cm.nodes[f[2]]});

  const std::size_t old_size = h.size();
  EngineState state(std::move(base), cut.nodes, cut_faces, cfg);
  std::vector<int> labels(old_size, 0);
  for (auto id : patch.nodes) labels[id] = 1;
  state.partition(std::move(labels));

  const std::size_t bound = cut.size() - 1;
  std::size_t done = 0;
  auto report = [&] {
    ++done;
    if (progress && !progress(done, bound)) throw Cancelled();
  };

  std::size_t patch_live = patch.nodes.size();
  NodeId patch_root = patch.nodes.front();
  while (patch_live > 1) {
    const auto w = state.step();
    if (!w) throw Error("patch is stuck at " + std::to_string(patch_live) + " nodes: no legal collapse remains inside it");
    if (state.label(*w) == 1) {
      --patch_live;
      patch_root = *w;
    }
    report();
  }
  std::vector<CollapseRecord> phase = state.trace();

  state.lift_partition();
  while (state.step()) report();

  OrderList new_order = state.order();
  Hierarchy out = std::move(state).take_hierarchy();

  // Map engine ids past the old size onto freed ids, then onto fresh ones.
  std::vector<NodeId> remap(out.size());
  std::iota(remap.begin(), remap.end(), NodeId{0});
  std::size_t next_free = 0;
  NodeId next_new = static_cast<NodeId>(old_size);
  for (NodeId id = static_cast<NodeId>(old_size); id < out.size(); ++id)
    remap[id] = next_free < freed.size() ? freed[next_free++] : next_new++;
  const std::size_t final_size = old_size + (next_new - old_size);
  std::vector<NodeId> holes(freed.begin() + static_cast<std::ptrdiff_t>(next_free), freed.end());

  if (!holes.empty()) {
    // Fewer collapses than before: close the gaps by shifting later ids down.
    log().warn("resimplification left {} unused ids; compacting node ids", holes.size());
    std::vector<NodeId> shift(final_size);
    std::vector<bool> hole(final_size, false);
    for (auto x : holes) hole[x] = true;
    NodeId compact = 0;
    for (NodeId id = 0; id < final_size; ++id) shift[id] = hole[id] ? 0 : compact++;
    for (auto& r : remap) r = shift[r];
  }

  Hierarchy result;
  result.vertex_leaf = h.vertex_leaf;
  result.faces = h.faces;
  result.nodes.resize(final_size - holes.size());
  for (NodeId id = 0; id < out.size(); ++id) {
    if (id < old_size && above[id]) continue;
    Node n = std::move(out.nodes[id]);
    for (auto& c : n.children) c = remap[c];
    if (n.parent) n.parent = remap[*n.parent];
    result.nodes[remap[id]] = std::move(n);
  }
  for (auto& leaf : result.vertex_leaf) leaf = remap[leaf];

  Resimplified r;
  r.order.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pos));
  for (auto& id : r.order) id = remap[id];
  for (auto id : new_order) r.order.push_back(remap[id]);
  for (auto& c : phase) c = {remap[c.node], remap[c.a], remap[c.b]};
  r.patch_phase = std::move(phase);
  r.patch_root = remap[patch_root];
  r.hierarchy = std::move(result);
  return r;
}

}  // namespace semisimp
