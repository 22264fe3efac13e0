#pragma once

#include "semisimp/hierarchy.hpp"

#include <span>
#include <utility>

namespace semisimp {

enum class ReorderKind { refining, simplifying };

struct ReorderAction {
  NodeId node = 0;
  std::size_t source = 0;
  std::size_t destination = 0;
  ReorderKind kind = ReorderKind::refining;
};

/// Moves the collapse at index i toward index k while keeping the list a
/// linear extension of the hierarchy.
///
/// Refining (i < k): the element and every ancestor found in (i, k] form a
/// block, in their existing relative order, that ends at index k; the element
/// leads the block. Simplifying (k < i): the element and every descendant
/// found in [k, i) form a block that starts at index k; the element closes it.
/// Everything outside [min(i,k), max(i,k)] keeps its index.
OrderList move_element(const OrderList& order, const Hierarchy& h, std::size_t i, std::size_t k);

ReorderAction describe_move(const OrderList& order, std::size_t i, std::size_t k);

struct LodEdit {
  OrderList order;
  LodPosition lod = 0;
};

/// Replaces each selected cut node by its parent: the parent collapse (with
/// any unapplied descendants it needs) moves to the current LOD position and
/// the position advances past it. Selections are processed in ascending id.
LodEdit local_simplify(const Hierarchy& h, const OrderList& order, LodPosition lod,
                       std::span<const NodeId> selection);

/// Replaces each selected interior cut node by its children: its collapse is
/// moved to just past the LOD position, which drops by one per node.
LodEdit local_refine(const Hierarchy& h, const OrderList& order, LodPosition lod, std::span<const NodeId> selection);

/// Keeps the selection (visible at `from`) visible at the coarser `to` by
/// delaying every ancestor collapse applied in [from, to) past `to`.
OrderList preserve_feature(const Hierarchy& h, const OrderList& order, LodPosition from, LodPosition to,
                           std::span<const NodeId> selection);

/// Makes the selection (visible at `from`) visible at the finer `to` by
/// performing the collapses that produce it, and their pending descendants,
/// before `to`. Throws Error when the subtrees do not fit in `to` collapses.
OrderList eliminate_feature(const Hierarchy& h, const OrderList& order, LodPosition from, LodPosition to,
                            std::span<const NodeId> selection);

}  // namespace semisimp
