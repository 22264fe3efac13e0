#pragma once

#include "semisimp/engine.hpp"

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace semisimp {

/// Cut nodes to be merged into their own subtree, plus the cut edges with
/// exactly one endpoint among them.
struct Patch {
  std::vector<NodeId> nodes;                        // ascending
  std::vector<std::pair<NodeId, NodeId>> boundary;  // (patch node, surround node), sorted

  bool contains(NodeId id) const;
};

/// Checks that the selection is nonempty, lies in the cut at `pos`, and is
/// edge-connected in the cut mesh. A disconnected selection names its components.
Patch define_patch(const Hierarchy& h, const OrderList& order, LodPosition pos, std::span<const NodeId> selection);

/// Called after every collapse with (collapses so far, upper bound). Return
/// false to cancel; the call then throws Cancelled.
using Progress = std::function<bool(std::size_t, std::size_t)>;

struct Resimplified {
  Hierarchy hierarchy;
  OrderList order;
  std::vector<CollapseRecord> patch_phase;  // collapses applied while the boundary was blocked
  NodeId patch_root = 0;
};

/// Drops everything above the cut at `pos` and rebuilds it: first with every
/// boundary-crossing merge blocked until the patch is a single node, then
/// without restriction. Nodes at or below the cut keep their ids and data;
/// new nodes take the ids freed above the cut, ascending, before appending.
Resimplified resimplify_segmented(const Hierarchy& h, const OrderList& order, LodPosition pos, const Patch& patch,
                                  const QuadricConfig& cfg = QuadricConfig{}, const Progress& progress = {});

}  // namespace semisimp
