#include "semisimp/hierarchy.hpp"

#include "semisimp/log.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

namespace semisimp {

namespace {

constexpr std::size_t kNpos = std::numeric_limits<std::size_t>::max();
constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

std::vector<bool> membership(std::size_t n, const std::vector<NodeId>& ids) {
  std::vector<bool> in(n, false);
  for (auto id : ids) in.at(id) = true;
  return in;
}

// Number of nodes flagged in `in_cut` on the path from each node to its root.
std::vector<int> path_counts(const Hierarchy& h, const std::vector<bool>& in_cut) {
  std::vector<int> count(h.size(), -1);
  std::vector<NodeId> path;
  for (NodeId start = 0; start < h.size(); ++start) {
    NodeId x = start;
    while (count[x] < 0) {
      path.push_back(x);
      if (!h.nodes[x].parent) break;
      x = *h.nodes[x].parent;
    }
    int above = count[x] >= 0 ? count[x] : 0;
    while (!path.empty()) {
      const NodeId y = path.back();
      path.pop_back();
      above += in_cut[y] ? 1 : 0;
      count[y] = above;
    }
  }
  return count;
}

}  // namespace

bool Hierarchy::is_ancestor(NodeId ancestor, NodeId node) const {
  auto p = nodes.at(node).parent;
  while (p) {
    if (*p == ancestor) return true;
    p = nodes[*p].parent;
  }
  return false;
}

std::vector<NodeId> Hierarchy::descendants(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack(nodes.at(id).children.rbegin(), nodes.at(id).children.rend());
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    out.push_back(x);
    const auto& ch = nodes[x].children;
    stack.insert(stack.end(), ch.rbegin(), ch.rend());
  }
  return out;
}

std::vector<NodeId> Hierarchy::ancestors(NodeId id) const {
  std::vector<NodeId> out;
  auto p = nodes.at(id).parent;
  while (p) {
    out.push_back(*p);
    p = nodes[*p].parent;
  }
  return out;
}

bool Cut::contains(NodeId id) const { return std::binary_search(nodes.begin(), nodes.end(), id); }

std::optional<VertexId> CutMesh::vertex_of(NodeId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) return std::nullopt;
  return static_cast<VertexId>(it - nodes.begin());
}

std::vector<std::size_t> order_positions(const Hierarchy& h, const OrderList& order) {
  std::vector<std::size_t> pos(h.size(), kNpos);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= h.size()) throw Error("order list references unknown node " + std::to_string(order[i]));
    pos[order[i]] = i;
  }
  return pos;
}

Cut cut_at(const Hierarchy& h, const OrderList& order, LodPosition k) {
  if (k > order.size())
    throw Error("LOD position " + std::to_string(k) + " outside [0, " + std::to_string(order.size()) + "]");
  const auto pos = order_positions(h, order);
  auto applied = [&](NodeId id) { return pos[id] != kNpos && pos[id] < k; };
  Cut cut;
  for (NodeId id = 0; id < h.size(); ++id) {
    const Node& n = h.nodes[id];
    const bool produced = n.is_leaf() || applied(id);
    const bool consumed = n.parent && applied(*n.parent);
    if (produced && !consumed) cut.nodes.push_back(id);
  }
  return cut;
}

std::vector<NodeId> cut_owners(const Hierarchy& h, const Cut& cut) {
  const auto in_cut = membership(h.size(), cut.nodes);
  std::vector<NodeId> owner(h.size(), kNoNode);
  std::vector<NodeId> path;
  auto resolve = [&](NodeId start) {
    NodeId x = start;
    while (!in_cut[x] && owner[x] == kNoNode) {
      path.push_back(x);
      if (!h.nodes[x].parent) throw Error("cut does not cover node " + std::to_string(start));
      x = *h.nodes[x].parent;
    }
    const NodeId result = in_cut[x] ? x : owner[x];
    for (auto y : path) owner[y] = result;
    path.clear();
    return result;
  };
  std::vector<NodeId> out(h.vertex_leaf.size());
  for (std::size_t v = 0; v < h.vertex_leaf.size(); ++v) out[v] = resolve(h.vertex_leaf[v]);
  return out;
}

CutMesh extract_mesh(const Hierarchy& h, const Cut& cut) {
  CutMesh out;
  out.nodes = cut.nodes;
  std::sort(out.nodes.begin(), out.nodes.end());
  std::vector<VertexId> index_of(h.size(), kNoNode);
  out.mesh.vertices.reserve(out.nodes.size());
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    const Node& n = h.nodes.at(out.nodes[i]);
    index_of[out.nodes[i]] = static_cast<VertexId>(i);
    out.mesh.vertices.push_back(VertexRecord{n.position, n.texcoord, n.normal});
  }
  const auto owners = cut_owners(h, cut);
  std::set<Face> seen;
  for (const Face& f : h.faces) {
    const Face g{index_of[owners[f[0]]], index_of[owners[f[1]]], index_of[owners[f[2]]]};
    if (g[0] == g[1] || g[1] == g[2] || g[0] == g[2]) continue;
    Face sorted = g;
    std::sort(sorted.begin(), sorted.end());
    if (!seen.insert(sorted).second) continue;
    out.mesh.faces.push_back(g);
  }
  return out;
}

LodPosition lod_for_faces(const Hierarchy& h, const OrderList& order, std::size_t budget) {
  auto faces_at = [&](LodPosition k) { return extract_mesh(h, cut_at(h, order, k)).mesh.face_count(); };
  if (faces_at(order.size()) > budget) {
    log().warn("no LOD reaches {} faces; using the coarsest", budget);
    return order.size();
  }
  // Face counts never grow with k: find the first k within budget.
  LodPosition lo = 0, hi = order.size();
  if (faces_at(0) <= budget) return 0;
  while (hi - lo > 1) {
    const LodPosition mid = lo + (hi - lo) / 2;
    (faces_at(mid) <= budget ? hi : lo) = mid;
  }
  return hi;
}

LodPosition lod_for_vertices(const Hierarchy& h, const OrderList& order, std::size_t n) {
  const std::size_t leaves = h.leaf_count();
  const std::size_t coarsest = leaves - order.size();
  if (n >= leaves) {
    if (n > leaves) log().warn("requested {} vertices; the model has {}", n, leaves);
    return 0;
  }
  if (n < coarsest) {
    log().warn("no cut has {} vertices; using the coarsest ({})", n, coarsest);
    return order.size();
  }
  return leaves - n;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::forest_shape: return "forest_shape";
    case ViolationKind::leaf_error: return "leaf_error";
    case ViolationKind::leaf_map: return "leaf_map";
    case ViolationKind::order_membership: return "order_membership";
    case ViolationKind::linear_extension: return "linear_extension";
    case ViolationKind::partition: return "partition";
  }
  return "unknown";
}

std::size_t count(const ValidationReport& report, ViolationKind kind) {
  return static_cast<std::size_t>(
      std::count_if(report.begin(), report.end(), [&](const Violation& v) { return v.kind == kind; }));
}

ValidationReport validate(const Hierarchy& h, const OrderList& order) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string msg) { report.push_back({kind, std::move(msg)}); };
  const std::size_t n = h.size();
  auto str = [](auto x) { return std::to_string(x); };

  // Forest shape.
  for (NodeId id = 0; id < n; ++id) {
    const Node& node = h.nodes[id];
    if (!node.children.empty() && node.children.size() != 2)
      add(ViolationKind::forest_shape,
          "node " + str(id) + " has " + str(node.children.size()) + " children (expected 0 or 2)");
    for (auto c : node.children) {
      if (c >= n || c == id) {
        add(ViolationKind::forest_shape, "node " + str(id) + " has invalid child " + str(c));
      } else if (h.nodes[c].parent != id) {
        add(ViolationKind::forest_shape, "node " + str(c) + " does not point back to parent " + str(id));
      }
    }
    if (node.children.size() == 2 && node.children[0] == node.children[1])
      add(ViolationKind::forest_shape, "node " + str(id) + " lists the same child twice");
    if (node.parent) {
      const NodeId p = *node.parent;
      if (p >= n) {
        add(ViolationKind::forest_shape, "node " + str(id) + " has invalid parent " + str(p));
      } else {
        const auto& pc = h.nodes[p].children;
        if (std::find(pc.begin(), pc.end(), id) == pc.end())
          add(ViolationKind::forest_shape, "node " + str(id) + " is not a child of its parent " + str(p));
      }
    }
  }
  const bool parents_sound = report.empty();
  if (parents_sound) {
    for (NodeId id = 0; id < n; ++id) {
      std::size_t steps = 0;
      auto p = h.nodes[id].parent;
      while (p && steps <= n) {
        p = h.nodes[*p].parent;
        ++steps;
      }
      if (steps > n) {
        add(ViolationKind::forest_shape, "node " + str(id) + " lies on a parent cycle");
        break;
      }
    }
  }

  for (NodeId id = 0; id < n; ++id) {
    const Node& node = h.nodes[id];
    if (node.is_leaf() && node.error != 0.0)
      add(ViolationKind::leaf_error, "leaf " + str(id) + " has error " + std::to_string(node.error));
  }

  // Leaf map: a bijection between original vertices and leaves.
  std::vector<int> leaf_hits(n, 0);
  for (std::size_t v = 0; v < h.vertex_leaf.size(); ++v) {
    const NodeId leaf = h.vertex_leaf[v];
    if (leaf >= n || !h.nodes[leaf].is_leaf()) {
      add(ViolationKind::leaf_map, "vertex " + str(v) + " maps to non-leaf " + str(leaf));
      continue;
    }
    ++leaf_hits[leaf];
  }
  for (NodeId id = 0; id < n; ++id) {
    if (h.nodes[id].is_leaf() && leaf_hits[id] != 1)
      add(ViolationKind::leaf_map, "leaf " + str(id) + " is mapped by " + str(leaf_hits[id]) + " vertices");
  }
  for (std::size_t f = 0; f < h.faces.size(); ++f) {
    for (auto v : h.faces[f]) {
      if (v >= h.vertex_leaf.size()) {
        add(ViolationKind::leaf_map, "face " + str(f) + " references unknown vertex " + str(v));
        break;
      }
    }
  }

  // Order list membership.
  std::vector<std::size_t> pos(n, kNpos);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeId id = order[i];
    if (id >= n) {
      add(ViolationKind::order_membership, "order[" + str(i) + "] references unknown node " + str(id));
    } else if (h.nodes[id].is_leaf()) {
      add(ViolationKind::order_membership, "order[" + str(i) + "] is leaf " + str(id));
    } else if (pos[id] != kNpos) {
      add(ViolationKind::order_membership, "node " + str(id) + " appears twice in the order list");
    } else {
      pos[id] = i;
    }
  }
  for (NodeId id = 0; id < n; ++id) {
    if (!h.nodes[id].is_leaf() && pos[id] == kNpos)
      add(ViolationKind::order_membership, "interior node " + str(id) + " missing from the order list");
  }

  // Linear extension.
  for (NodeId id = 0; id < n; ++id) {
    if (pos[id] == kNpos) continue;
    for (auto c : h.nodes[id].children) {
      if (c < n && pos[c] != kNpos && pos[c] > pos[id])
        add(ViolationKind::linear_extension, "child " + str(c) + " at " + str(pos[c]) + " follows parent " +
                                                 str(id) + " at " + str(pos[id]));
    }
  }

  if (!report.empty()) return report;

  // Partition property at sampled LOD positions.
  std::mt19937_64 rng(0x5e15u);
  std::uniform_int_distribution<std::size_t> pick(0, order.size());
  for (int s = 0; s < 10; ++s) {
    const LodPosition k = pick(rng);
    const Cut cut = cut_at(h, order, k);
    const auto counts = path_counts(h, membership(n, cut.nodes));
    for (std::size_t v = 0; v < h.vertex_leaf.size(); ++v) {
      const NodeId leaf = h.vertex_leaf[v];
      if (counts[leaf] != 1) {
        add(ViolationKind::partition, "at LOD " + str(k) + ", leaf " + str(leaf) + " is covered by " +
                                          str(counts[leaf]) + " cut nodes");
        break;
      }
    }
  }
  return report;
}

Mesh leaf_mesh(const Hierarchy& h) {
  Mesh m;
  m.vertices.reserve(h.vertex_leaf.size());
  for (auto leaf : h.vertex_leaf) {
    const Node& n = h.nodes.at(leaf);
    m.vertices.push_back(VertexRecord{n.position, n.texcoord, n.normal});
  }
  m.faces = h.faces;
  return m;
}

}  // namespace semisimp
