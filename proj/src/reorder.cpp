#include "semisimp/reorder.hpp"

#include <algorithm>

namespace semisimp {

namespace {

void require_in_cut(const Cut& cut, std::span<const NodeId> selection, LodPosition lod) {
  for (auto id : selection) {
    if (!cut.contains(id))
      throw Error("node " + std::to_string(id) + " is not in the cut at LOD " + std::to_string(lod));
  }
}

std::vector<NodeId> sorted_unique(std::span<const NodeId> ids) {
  std::vector<NodeId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// flag[x] is true for every strict ancestor of a selected node.
std::vector<bool> ancestor_flags(const Hierarchy& h, std::span<const NodeId> selection) {
  std::vector<bool> flag(h.size(), false);
  for (auto s : selection) {
    auto p = h.nodes[s].parent;
    while (p && !flag[*p]) {
      flag[*p] = true;
      p = h.nodes[*p].parent;
    }
  }
  return flag;
}

// flag[x] is true for every selected node and each of its descendants.
std::vector<bool> subtree_flags(const Hierarchy& h, std::span<const NodeId> selection) {
  std::vector<bool> flag(h.size(), false);
  for (auto s : selection) {
    flag[s] = true;
    for (auto d : h.descendants(s)) flag[d] = true;
  }
  return flag;
}

}  // namespace

OrderList move_element(const OrderList& order, const Hierarchy& h, std::size_t i, std::size_t k) {
  if (i >= order.size() || k >= order.size())
    throw Error("move indices " + std::to_string(i) + " -> " + std::to_string(k) + " outside the order list of " +
                std::to_string(order.size()));
  if (i == k) return order;
  const NodeId c = order[i];
  OrderList out;
  out.reserve(order.size());
  std::vector<NodeId> block;
  std::vector<NodeId> rest;
  if (i < k) {
    block.push_back(c);
    for (std::size_t j = i + 1; j <= k; ++j) (h.is_ancestor(order[j], c) ? block : rest).push_back(order[j]);
    out.insert(out.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.end(), rest.begin(), rest.end());
    out.insert(out.end(), block.begin(), block.end());
    out.insert(out.end(), order.begin() + static_cast<std::ptrdiff_t>(k + 1), order.end());
  } else {
    for (std::size_t j = k; j < i; ++j) (h.is_ancestor(c, order[j]) ? block : rest).push_back(order[j]);
    block.push_back(c);
    out.insert(out.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    out.insert(out.end(), block.begin(), block.end());
    out.insert(out.end(), rest.begin(), rest.end());
    out.insert(out.end(), order.begin() + static_cast<std::ptrdiff_t>(i + 1), order.end());
  }
  return out;
}

ReorderAction describe_move(const OrderList& order, std::size_t i, std::size_t k) {
  if (i >= order.size() || k >= order.size()) throw Error("move indices outside the order list");
  return ReorderAction{order[i], i, k, i < k ? ReorderKind::refining : ReorderKind::simplifying};
}

LodEdit local_simplify(const Hierarchy& h, const OrderList& order, LodPosition lod,
                       std::span<const NodeId> selection) {
  const Cut cut = cut_at(h, order, lod);
  require_in_cut(cut, selection, lod);
  for (auto id : selection) {
    if (!h.nodes[id].parent) throw Error("node " + std::to_string(id) + " is a root and has no parent to show");
  }
  LodEdit edit{order, lod};
  for (auto s : sorted_unique(selection)) {
    const auto pos = order_positions(h, edit.order);
    const NodeId p = *h.nodes[s].parent;
    const std::size_t j = pos[p];
    if (j < edit.lod) continue;  // already replaced alongside an earlier sibling
    std::size_t pending = 0;
    for (std::size_t x = edit.lod; x < j; ++x) pending += h.is_ancestor(p, edit.order[x]) ? 1 : 0;
    edit.order = move_element(edit.order, h, j, edit.lod);
    edit.lod += pending + 1;
  }
  return edit;
}

LodEdit local_refine(const Hierarchy& h, const OrderList& order, LodPosition lod, std::span<const NodeId> selection) {
  const Cut cut = cut_at(h, order, lod);
  require_in_cut(cut, selection, lod);
  for (auto id : selection) {
    if (h.nodes[id].is_leaf()) throw Error("node " + std::to_string(id) + " is a leaf and cannot be refined");
  }
  LodEdit edit{order, lod};
  for (auto s : sorted_unique(selection)) {
    const auto pos = order_positions(h, edit.order);
    edit.order = move_element(edit.order, h, pos[s], edit.lod - 1);
    edit.lod -= 1;
  }
  return edit;
}

OrderList preserve_feature(const Hierarchy& h, const OrderList& order, LodPosition from, LodPosition to,
                           std::span<const NodeId> selection) {
  if (to > order.size()) throw Error("LOD position " + std::to_string(to) + " out of range");
  if (from >= to) throw Error("feature preservation moves to a coarser LOD (from < to)");
  require_in_cut(cut_at(h, order, from), selection, from);

  const auto anc = ancestor_flags(h, selection);
  std::vector<NodeId> delayed;
  for (std::size_t x = from; x < to; ++x)
    if (anc[order[x]]) delayed.push_back(order[x]);
  if (delayed.empty()) return order;

  // Collapses unrelated to the selection fill the slots the delayed ones vacate.
  std::vector<NodeId> pulled;
  std::vector<NodeId> rest;
  for (std::size_t x = to; x < order.size(); ++x) {
    if (pulled.size() < delayed.size() && !anc[order[x]])
      pulled.push_back(order[x]);
    else
      rest.push_back(order[x]);
  }
  if (pulled.size() < delayed.size())
    throw Error("cannot keep the selection visible at LOD " + std::to_string(to) + ": " +
                std::to_string(delayed.size()) + " collapses must be delayed but only " +
                std::to_string(pulled.size()) + " can take their place");

  OrderList out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(from));
  for (std::size_t x = from; x < to; ++x)
    if (!anc[order[x]]) out.push_back(order[x]);
  out.insert(out.end(), pulled.begin(), pulled.end());
  out.insert(out.end(), delayed.begin(), delayed.end());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

OrderList eliminate_feature(const Hierarchy& h, const OrderList& order, LodPosition from, LodPosition to,
                            std::span<const NodeId> selection) {
  if (from > order.size()) throw Error("LOD position " + std::to_string(from) + " out of range");
  if (from == to) return order;
  if (from < to) throw Error("feature elimination moves to a finer LOD (from > to)");
  require_in_cut(cut_at(h, order, from), selection, from);

  const auto sub = subtree_flags(h, selection);
  std::vector<bool> hasten(h.size(), false);
  std::size_t needed = 0;
  for (std::size_t x = to; x < from; ++x) {
    if (sub[order[x]]) {
      hasten[order[x]] = true;
      ++needed;
    }
  }
  if (needed == 0) return order;

  // The latest collapses outside the selected subtrees give up their slots.
  std::vector<bool> deferred(h.size(), false);
  std::size_t freed = 0;
  for (std::size_t x = to; x-- > 0 && freed < needed;) {
    if (!sub[order[x]]) {
      deferred[order[x]] = true;
      ++freed;
    }
  }
  if (freed < needed) {
    std::size_t subtree_total = 0;
    for (std::size_t x = 0; x < from; ++x) subtree_total += sub[order[x]] ? 1 : 0;
    throw Error("cannot show the selection at LOD " + std::to_string(to) + ": its subtrees need " +
                std::to_string(subtree_total) + " collapses, " + std::to_string(subtree_total - to) +
                " more than the LOD allows");
  }

  OrderList out;
  out.reserve(order.size());
  for (std::size_t x = 0; x < to; ++x)
    if (!deferred[order[x]]) out.push_back(order[x]);
  for (std::size_t x = to; x < from; ++x)
    if (hasten[order[x]]) out.push_back(order[x]);
  for (std::size_t x = 0; x < to; ++x)
    if (deferred[order[x]]) out.push_back(order[x]);
  for (std::size_t x = to; x < order.size(); ++x)
    if (!hasten[order[x]]) out.push_back(order[x]);
  return out;
}

}  // namespace semisimp
