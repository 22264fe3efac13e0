#pragma once

#include "semisimp/hierarchy.hpp"

#include <functional>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace semisimp {

/// One queued edge collapse. Entries go stale when either endpoint retires
/// or the edge is re-queued under a newer stamp; stale entries are dropped
/// when they reach the front.
struct Candidate {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  Vec3 position = Vec3::Zero();
  double error = 0.0;
  std::uint32_t stamp = 0;
};

/// Pops in ascending error, ties by the (a, b) edge key.
struct CandidateAfter {
  bool operator()(const Candidate& x, const Candidate& y) const {
    if (x.error != y.error) return x.error > y.error;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

struct CollapseRecord {
  NodeId node;
  NodeId a;
  NodeId b;
};

/// Greedy edge-collapse search over a live cut. Owns the hierarchy being
/// built: leaves (or preserved cut nodes) first, one new interior node per
/// applied collapse.
class EngineState {
 public:
  /// One leaf per vertex, leaf quadrics from `vertex_quadric`, one candidate per edge.
  EngineState(const Mesh& mesh, const QuadricConfig& cfg);

  /// Resumes from an existing cut: `base` holds every node at or below the
  /// cut (its cut nodes must have no parent), `cut_faces` is the cut mesh in
  /// node ids. Candidates use the nodes' stored quadrics.
  EngineState(Hierarchy base, const std::vector<NodeId>& cut, const std::vector<Face>& cut_faces,
              const QuadricConfig& cfg);

  /// Applies the cheapest valid, legal, unblocked collapse. Returns the new
  /// node, or nothing when no legal candidate remains.
  std::optional<NodeId> step();

  /// Runs `step` to exhaustion.
  void run();

  /// Restricts merging to nodes with equal labels; edges between different
  /// labels are held back. Labels of new nodes come from their children.
  void partition(std::vector<int> labels);
  /// Lifts the partition and re-queues held-back edges whose endpoints are both live.
  void lift_partition();
  int label(NodeId id) const { return labels_.empty() ? 0 : labels_[id]; }

  const Hierarchy& hierarchy() const { return h_; }
  const OrderList& order() const { return order_; }
  const std::vector<CollapseRecord>& trace() const { return trace_; }
  const QuadricConfig& config() const { return cfg_; }

  bool is_live(NodeId id) const { return id < live_.size() && live_[id]; }
  std::vector<NodeId> live_nodes() const;
  std::size_t live_count() const { return live_count_; }
  /// Live neighbors of a live node, ascending.
  std::vector<NodeId> neighbors(NodeId id) const;
  /// Current cut mesh faces in node ids.
  std::vector<Face> live_faces() const;
  std::size_t blocked_count() const { return blocked_.size(); }

  /// Freshly evaluated candidate for a live edge (ignores the queue).
  Candidate evaluate(NodeId a, NodeId b) const;
  /// Whether collapsing live edge (a,b) at `placement` is legal in the current cut.
  bool is_legal(NodeId a, NodeId b, const Vec3& placement) const;

  /// Front of the queue after discarding stale entries; does not apply it.
  std::optional<Candidate> peek();

  Hierarchy take_hierarchy() && { return std::move(h_); }
  OrderList take_order() && { return std::move(order_); }

 private:
  void init_live(const std::vector<NodeId>& cut, const std::vector<Face>& faces);
  void enqueue(NodeId a, NodeId b);
  bool stale(const Candidate& c) const;
  NodeId apply(const Candidate& c);
  void park(NodeId a, NodeId b);

  QuadricConfig cfg_;
  Hierarchy h_;
  OrderList order_;
  std::vector<CollapseRecord> trace_;

  std::vector<bool> live_;
  std::size_t live_count_ = 0;
  std::vector<Face> faces_;
  std::vector<bool> face_alive_;
  std::vector<std::vector<std::uint32_t>> incident_;  // node -> live face indices

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateAfter> queue_;
  std::unordered_map<std::uint64_t, std::uint32_t> stamps_;
  // Edges that were illegal when popped; retried once their neighborhood changes.
  std::unordered_set<std::uint64_t> parked_;
  std::vector<std::vector<NodeId>> parked_at_;
  std::unordered_set<std::uint64_t> blocked_;
  std::vector<int> labels_;
};

/// Free-function entry points.
inline EngineState init_state(const Mesh& mesh, const QuadricConfig& cfg) { return EngineState(mesh, cfg); }
inline std::optional<NodeId> step_collapse(EngineState& state) { return state.step(); }

/// Runs the greedy search to completion over `mesh`.
std::pair<Hierarchy, OrderList> build_hierarchy(const Mesh& mesh, const QuadricConfig& cfg = QuadricConfig{});

}  // namespace semisimp
