#pragma once

#include "semisimp/mesh.hpp"
#include "semisimp/quadric.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semisimp {

struct Node {
  std::vector<NodeId> children;  // empty for leaves, two entries for collapses
  std::optional<NodeId> parent;
  Vec3 position = Vec3::Zero();
  double error = 0.0;  // collapse error; 0 for leaves
  Quadric quadric;
  std::optional<Vec2> texcoord;
  std::optional<Vec3> normal;

  bool is_leaf() const { return children.empty(); }
};

/// Binary forest over the original vertices. Interior nodes are edge
/// collapses; ids are dense indices into `nodes`.
struct Hierarchy {
  std::vector<Node> nodes;
  std::vector<NodeId> vertex_leaf;  // original vertex index -> leaf node
  std::vector<Face> faces;          // original faces, in original vertex indices

  std::size_t size() const { return nodes.size(); }
  std::size_t leaf_count() const { return vertex_leaf.size(); }
  const Node& operator[](NodeId id) const { return nodes.at(id); }
  Node& operator[](NodeId id) { return nodes.at(id); }

  bool is_ancestor(NodeId ancestor, NodeId node) const;
  /// Strict descendants of `id` in depth-first preorder.
  std::vector<NodeId> descendants(NodeId id) const;
  std::vector<NodeId> ancestors(NodeId id) const;
};

/// Interior node ids in the order collapses are applied; front = early end.
using OrderList = std::vector<NodeId>;

/// Number of collapses from the front of the order list that are applied.
using LodPosition = std::size_t;

/// Node set with exactly one member on every leaf-to-root path, ascending ids.
struct Cut {
  std::vector<NodeId> nodes;

  bool contains(NodeId id) const;
  std::size_t size() const { return nodes.size(); }
};

/// Mesh of a cut plus the node id behind each of its vertices.
struct CutMesh {
  Mesh mesh;
  std::vector<NodeId> nodes;  // vertex index -> node id, ascending

  /// Vertex index of `id`, or nothing when the node is not in the cut.
  std::optional<VertexId> vertex_of(NodeId id) const;
};

/// position[node] = index of node in the order list, or npos for leaves.
std::vector<std::size_t> order_positions(const Hierarchy& h, const OrderList& order);

Cut cut_at(const Hierarchy& h, const OrderList& order, LodPosition k);
CutMesh extract_mesh(const Hierarchy& h, const Cut& cut);

/// For every original vertex, the cut node covering its leaf.
std::vector<NodeId> cut_owners(const Hierarchy& h, const Cut& cut);

/// The most detailed cut (smallest k) with at most `budget` faces.
LodPosition lod_for_faces(const Hierarchy& h, const OrderList& order, std::size_t budget);
/// The k whose cut has exactly n nodes, or the nearest cut with fewer nodes.
LodPosition lod_for_vertices(const Hierarchy& h, const OrderList& order, std::size_t n);

enum class ViolationKind {
  forest_shape,
  leaf_error,
  leaf_map,
  order_membership,
  linear_extension,
  partition,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Checks forest shape, leaf errors, the leaf map, order-list membership,
/// linear extension, and the partition property at 10 sampled LOD positions
/// (sampled only when the structure and ordering are sound).
ValidationReport validate(const Hierarchy& h, const OrderList& order);

std::size_t count(const ValidationReport& report, ViolationKind kind);

/// The original mesh rebuilt from the leaves.
Mesh leaf_mesh(const Hierarchy& h);

/// Versioned JSON document; positions round-trip bit-exactly.
std::string save_hierarchy(const Hierarchy& h, const OrderList& order);
std::pair<Hierarchy, OrderList> load_hierarchy(std::string_view json_text,
                                               const QuadricConfig& cfg = QuadricConfig{});

inline constexpr std::string_view kHierarchyVersion = "semisimp-hierarchy/1";

}  // namespace semisimp
