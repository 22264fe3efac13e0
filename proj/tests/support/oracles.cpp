#include "oracles.hpp"

#include <algorithm>
#include <deque>

namespace oracle {

double plane_distance_sum(const Mesh& mesh, VertexId v, const Vec3& x, double boundary_weight) {
  std::map<std::pair<VertexId, VertexId>, int> directed;
  for (const Face& f : mesh.faces)
    for (int i = 0; i < 3; ++i) directed[{f[i], f[(i + 1) % 3]}]++;
  double total = 0.0;
  for (const Face& f : mesh.faces) {
    if (f[0] != v && f[1] != v && f[2] != v) continue;
    const Vec3& a = mesh.vertices[f[0]].position;
    const Vec3& b = mesh.vertices[f[1]].position;
    const Vec3& c = mesh.vertices[f[2]].position;
    const Vec3 cross = (b - a).cross(c - a);
    if (cross.norm() == 0.0) continue;
    const Vec3 n = cross.normalized();
    const double area = 0.5 * cross.norm();
    const double d = n.dot(x - a);
    total += area * d * d;
    for (int i = 0; i < 3; ++i) {
      const VertexId p = f[i], q = f[(i + 1) % 3];
      if (p != v && q != v) continue;
      // A boundary edge has no face running it the other way.
      if (directed.count({q, p})) continue;
      const Vec3& pp = mesh.vertices[p].position;
      const Vec3 e = mesh.vertices[q].position - pp;
      const Vec3 m = e.cross(n).normalized();
      const double dist = m.dot(x - pp);
      total += boundary_weight * e.squaredNorm() * dist * dist;
    }
  }
  return total;
}

std::map<VertexId, int> hops(const Mesh& mesh, VertexId v, int r) {
  std::vector<std::set<VertexId>> nbr(mesh.vertices.size());
  for (const Face& f : mesh.faces) {
    for (int i = 0; i < 3; ++i) {
      nbr[f[i]].insert(f[(i + 1) % 3]);
      nbr[f[(i + 1) % 3]].insert(f[i]);
    }
  }
  std::map<VertexId, int> dist{{v, 0}};
  std::deque<VertexId> queue{v};
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    if (dist[u] == r) continue;
    for (auto w : nbr[u]) {
      if (dist.count(w)) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

std::set<NodeId> replay_cut(const Hierarchy& h, const OrderList& order, std::size_t k) {
  std::set<NodeId> cut;
  for (NodeId id = 0; id < h.nodes.size(); ++id)
    if (h.nodes[id].children.empty()) cut.insert(id);
  for (std::size_t i = 0; i < k; ++i) {
    const Node& n = h.nodes[order[i]];
    for (auto c : n.children) cut.erase(c);
    cut.insert(order[i]);
  }
  return cut;
}

std::set<NodeId> leaves_below(const Hierarchy& h, NodeId id) {
  std::set<NodeId> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    if (h.nodes[x].children.empty())
      out.insert(x);
    else
      for (auto c : h.nodes[x].children) stack.push_back(c);
  }
  return out;
}

bool is_valid_surface(const Mesh& mesh) {
  std::set<std::array<std::uint32_t, 3>> seen;
  std::map<std::pair<VertexId, VertexId>, int> directed;
  std::map<std::pair<VertexId, VertexId>, int> undirected;
  for (const Face& f : mesh.faces) {
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return false;
    auto key = f;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) return false;
    for (int i = 0; i < 3; ++i) {
      const VertexId p = f[i], q = f[(i + 1) % 3];
      if (++directed[{p, q}] > 1) return false;
      if (++undirected[{std::min(p, q), std::max(p, q)}] > 2) return false;
    }
  }
  return true;
}

double mean_leaf_error(const Hierarchy& h, const OrderList& order, std::size_t k) {
  const std::set<NodeId> cut = replay_cut(h, order, k);
  double total = 0.0;
  for (auto c : cut)
    for (auto leaf : leaves_below(h, c)) total += h.nodes[leaf].quadric.eval(h.nodes[c].position);
  return total / static_cast<double>(h.leaf_count());
}

double random_order_error(const Mesh& input, std::size_t target_faces, std::uint64_t seed, const QuadricConfig& cfg) {
  Mesh mesh = input;
  std::mt19937_64 rng(seed);
  const std::size_t n = mesh.vertices.size();
  std::vector<Quadric> leaf_q(n), q(n);
  for (VertexId v = 0; v < n; ++v) leaf_q[v] = q[v] = vertex_quadric(mesh, v, cfg);
  std::vector<VertexId> owner(n);
  for (VertexId v = 0; v < n; ++v) owner[v] = v;
  auto find = [&](VertexId v) {
    while (owner[v] != v) v = owner[v] = owner[owner[v]];
    return v;
  };

  while (mesh.faces.size() > target_faces) {
    std::set<std::pair<VertexId, VertexId>> edges;
    for (const Face& f : mesh.faces)
      for (int i = 0; i < 3; ++i) edges.insert({std::min(f[i], f[(i + 1) % 3]), std::max(f[i], f[(i + 1) % 3])});
    std::vector<std::pair<VertexId, VertexId>> pool(edges.begin(), edges.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    bool done = false;
    for (auto [a, b] : pool) {
      const PlacementResult r =
          place(q[a] + q[b], mesh.vertices[a].position, mesh.vertices[b].position, cfg.placement);
      if (!collapse_is_legal(mesh, a, b, r.position)) continue;
      mesh.vertices[a].position = r.position;
      q[a] += q[b];
      owner[b] = a;
      std::vector<Face> next;
      for (Face f : mesh.faces) {
        for (auto& x : f)
          if (x == b) x = a;
        if (f[0] != f[1] && f[1] != f[2] && f[0] != f[2]) next.push_back(f);
      }
      mesh.faces = std::move(next);
      done = true;
      break;
    }
    if (!done) break;
  }
  double total = 0.0;
  for (VertexId v = 0; v < n; ++v) total += leaf_q[v].eval(mesh.vertices[find(v)].position);
  return total / static_cast<double>(n);
}

}  // namespace oracle
