#include "semisimp/engine.hpp"

#include "semisimp/log.hpp"

#include <algorithm>

namespace semisimp {

namespace {

bool has_corner(const Face& f, std::uint32_t x) { return f[0] == x || f[1] == x || f[2] == x; }

}  // namespace

EngineState::EngineState(const Mesh& mesh, const QuadricConfig& cfg) : cfg_(cfg) {
  if (mesh.vertices.empty()) throw Error("cannot simplify an empty mesh");
  mesh.check();
  const Adjacency adj(mesh);
  h_.nodes.resize(mesh.vertices.size());
  h_.vertex_leaf.resize(mesh.vertices.size());
  std::vector<NodeId> cut(mesh.vertices.size());
  for (VertexId v = 0; v < mesh.vertices.size(); ++v) {
    Node& n = h_.nodes[v];
    n.position = mesh.vertices[v].position;
    n.texcoord = mesh.vertices[v].texcoord;
    n.normal = mesh.vertices[v].normal;
    n.quadric = vertex_quadric(mesh, adj, v, cfg);
    h_.vertex_leaf[v] = v;
    cut[v] = v;
  }
  h_.faces = mesh.faces;
  init_live(cut, mesh.faces);
}

EngineState::EngineState(Hierarchy base, const std::vector<NodeId>& cut, const std::vector<Face>& cut_faces,
                         const QuadricConfig& cfg)
    : cfg_(cfg), h_(std::move(base)) {
  if (cut.empty()) throw Error("cannot simplify an empty cut");
  for (auto id : cut) {
    if (id >= h_.size()) throw Error("cut node " + std::to_string(id) + " out of range");
    if (h_.nodes[id].parent) throw Error("cut node " + std::to_string(id) + " still has a parent");
  }
  init_live(cut, cut_faces);
}

void EngineState::init_live(const std::vector<NodeId>& cut, const std::vector<Face>& faces) {
  live_.assign(h_.size(), false);
  for (auto id : cut) live_[id] = true;
  live_count_ = cut.size();
  incident_.assign(h_.size(), {});
  parked_at_.assign(h_.size(), {});
  faces_ = faces;
  face_alive_.assign(faces_.size(), true);
  for (std::uint32_t fi = 0; fi < faces_.size(); ++fi) {
    for (auto c : faces_[fi]) {
      if (c >= h_.size() || !live_[c]) throw Error("cut face references a node outside the cut");
      incident_[c].push_back(fi);
    }
  }
  std::vector<NodeId> sorted = cut;
  std::sort(sorted.begin(), sorted.end());
  for (auto a : sorted) {
    for (auto b : neighbors(a))
      if (a < b) enqueue(a, b);
  }
}

std::vector<NodeId> EngineState::live_nodes() const {
  std::vector<NodeId> out;
  out.reserve(live_count_);
  for (NodeId id = 0; id < live_.size(); ++id)
    if (live_[id]) out.push_back(id);
  return out;
}

std::vector<NodeId> EngineState::neighbors(NodeId id) const {
  std::vector<NodeId> out;
  for (auto fi : incident_.at(id)) {
    for (auto c : faces_[fi])
      if (c != id) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Face> EngineState::live_faces() const {
  std::vector<Face> out;
  for (std::size_t i = 0; i < faces_.size(); ++i)
    if (face_alive_[i]) out.push_back(faces_[i]);
  return out;
}

Candidate EngineState::evaluate(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  const Node& na = h_.nodes.at(a);
  const Node& nb = h_.nodes.at(b);
  const PlacementResult r = place(na.quadric + nb.quadric, na.position, nb.position, cfg_.placement);
  return Candidate{a, b, r.position, r.error, 0};
}

bool EngineState::is_legal(NodeId a, NodeId b, const Vec3& placement) const {
  std::vector<Face> faces_a;
  std::vector<Face> faces_b;
  std::vector<Face> star;
  for (auto fi : incident_[a]) {
    faces_a.push_back(faces_[fi]);
    star.push_back(faces_[fi]);
  }
  for (auto fi : incident_[b]) {
    faces_b.push_back(faces_[fi]);
    if (!has_corner(faces_[fi], a)) star.push_back(faces_[fi]);
  }
  if (!legality::link_condition(faces_a, faces_b, a, b)) return false;
  return legality::normals_preserved(star, a, b, placement,
                                     [&](std::uint32_t id) -> const Vec3& { return h_.nodes[id].position; });
}

void EngineState::enqueue(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  const auto key = edge_key(a, b);
  parked_.erase(key);
  if (!labels_.empty() && labels_[a] != labels_[b]) {
    ++stamps_[key];
    blocked_.insert(key);
    return;
  }
  Candidate c = evaluate(a, b);
  c.stamp = ++stamps_[key];
  queue_.push(c);
}

bool EngineState::stale(const Candidate& c) const {
  if (!live_[c.a] || !live_[c.b]) return true;
  auto it = stamps_.find(edge_key(c.a, c.b));
  return it == stamps_.end() || it->second != c.stamp;
}

void EngineState::park(NodeId a, NodeId b) {
  parked_.insert(edge_key(a, b));
  parked_at_[a].push_back(b);
  parked_at_[b].push_back(a);
}

std::optional<Candidate> EngineState::peek() {
  while (!queue_.empty() && stale(queue_.top())) queue_.pop();
  if (queue_.empty()) return std::nullopt;
  return queue_.top();
}

std::optional<NodeId> EngineState::step() {
  while (!queue_.empty()) {
    const Candidate c = queue_.top();
    queue_.pop();
    if (stale(c)) continue;
    if (!is_legal(c.a, c.b, c.position)) {
      park(c.a, c.b);
      continue;
    }
    return apply(c);
  }
  return std::nullopt;
}

void EngineState::run() {
  while (step()) {
  }
}

NodeId EngineState::apply(const Candidate& c) {
  const NodeId a = c.a, b = c.b;
  const auto w = static_cast<NodeId>(h_.size());
  {
    Node n;
    n.children = {a, b};
    n.position = c.position;
    n.error = c.error;
    n.quadric = h_.nodes[a].quadric + h_.nodes[b].quadric;
    // Attributes are inherited from the child nearer the new position.
    const Node& src = (h_.nodes[a].position - c.position).squaredNorm() <=
                              (h_.nodes[b].position - c.position).squaredNorm()
                          ? h_.nodes[a]
                          : h_.nodes[b];
    n.texcoord = src.texcoord;
    n.normal = src.normal;
    h_.nodes.push_back(std::move(n));
  }
  h_.nodes[a].parent = w;
  h_.nodes[b].parent = w;
  live_[a] = false;
  live_[b] = false;
  live_.push_back(true);
  --live_count_;
  if (!labels_.empty()) labels_.push_back(labels_[a]);
  incident_.emplace_back();
  parked_at_.emplace_back();

  std::vector<std::uint32_t> touched = incident_[a];
  touched.insert(touched.end(), incident_[b].begin(), incident_[b].end());
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (auto fi : touched) {
    Face& f = faces_[fi];
    if (has_corner(f, a) && has_corner(f, b)) {
      face_alive_[fi] = false;
      for (auto x : f) {
        if (x == a || x == b) continue;
        auto& inc = incident_[x];
        inc.erase(std::remove(inc.begin(), inc.end(), fi), inc.end());
      }
      continue;
    }
    for (auto& x : f)
      if (x == a || x == b) x = w;
    incident_[w].push_back(fi);
  }
  incident_[a].clear();
  incident_[b].clear();
  incident_[a].shrink_to_fit();
  incident_[b].shrink_to_fit();

  order_.push_back(w);
  trace_.push_back({w, a, b});

  const auto ring = neighbors(w);
  for (auto n : ring) enqueue(w, n);
  for (auto n : ring) {
    auto retry = std::move(parked_at_[n]);
    parked_at_[n].clear();
    std::sort(retry.begin(), retry.end());
    retry.erase(std::unique(retry.begin(), retry.end()), retry.end());
    for (auto x : retry) {
      if (live_[x] && parked_.count(edge_key(n, x))) enqueue(n, x);
    }
  }
  return w;
}

void EngineState::partition(std::vector<int> labels) {
  if (labels.size() != h_.size()) throw Error("partition labels must cover every node");
  labels_ = std::move(labels);
  for (auto a : live_nodes()) {
    for (auto b : neighbors(a)) {
      if (a < b && labels_[a] != labels_[b]) {
        const auto key = edge_key(a, b);
        ++stamps_[key];
        parked_.erase(key);
        blocked_.insert(key);
      }
    }
  }
}

void EngineState::lift_partition() {
  labels_.clear();
  std::vector<std::uint64_t> held(blocked_.begin(), blocked_.end());
  blocked_.clear();
  std::sort(held.begin(), held.end());
  for (auto key : held) {
    const auto [a, b] = edge_from_key(key);
    if (live_[a] && live_[b]) enqueue(a, b);
  }
}

std::pair<Hierarchy, OrderList> build_hierarchy(const Mesh& mesh, const QuadricConfig& cfg) {
  EngineState state(mesh, cfg);
  state.run();
  log().info("built hierarchy: {} leaves, {} collapses, {} roots", mesh.vertex_count(), state.order().size(),
             state.live_count());
  OrderList order = state.order();
  return {std::move(state).take_hierarchy(), std::move(order)};
}

}  // namespace semisimp
