#include "semisimp/hierarchy.hpp"

#include <json.hpp>

#include <functional>

namespace semisimp {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

class Reader {
 public:

  const json& field(const json& obj, const char* name, const std::string& where) const {
    if (!obj.is_object() || !obj.contains(name)) throw ParseError(0, "missing field '" + where + name + "'");
    return obj.at(name);
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vec(const json& v, const std::string& where) const {
    if (!v.is_array() || v.size() != N) throw ParseError(0, "field '" + where + "' must be an array of " + std::to_string(N) + " numbers");
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
      if (!v[i].is_number()) throw ParseError(0, "field '" + where + "' must hold numbers");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  std::uint32_t index(const json& v, const std::string& where) const {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 0xfffffffeLL)
      throw ParseError(0, "field '" + where + "' must be a nonnegative integer");
    return v.get<std::uint32_t>();
  }

  const json& array(const json& obj, const char* name) const {
    const json& a = field(obj, name, "");
    if (!a.is_array()) throw ParseError(0, std::string("field '") + name + "' must be an array");
    return a;
  }
};

}  // namespace

std::string save_hierarchy(const Hierarchy& h, const OrderList& order) {
  json nodes = json::array();
  for (NodeId id = 0; id < h.size(); ++id) {
    const Node& n = h.nodes[id];
    json node{{"id", id},
              {"children", n.is_leaf() ? json(nullptr) : json(n.children)},
              {"position", vec_json(n.position)},
              {"error", n.error},
              {"quadric", n.quadric.coefficients()}};
    if (n.texcoord) node["texcoord"] = vec_json(*n.texcoord);
    if (n.normal) node["normal"] = vec_json(*n.normal);
    nodes.push_back(std::move(node));
  }
  json leaf_map = json::array();
  for (std::size_t v = 0; v < h.vertex_leaf.size(); ++v) leaf_map.push_back({h.vertex_leaf[v], v});
  json doc{{"version", kHierarchyVersion},
           {"nodes", std::move(nodes)},
           {"order", order},
           {"leaf_vertex_map", std::move(leaf_map)},
           {"faces", h.faces}};
  return doc.dump() + "\n";
}

std::pair<Hierarchy, OrderList> load_hierarchy(std::string_view text, const QuadricConfig& cfg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("hierarchy file is not JSON: ") + e.what());
  }
  const Reader rd{};
  const json& version = rd.field(doc, "version", "");
  if (!version.is_string() || version.get<std::string>() != kHierarchyVersion)
    throw ParseError(0, "field 'version' must be \"" + std::string(kHierarchyVersion) + "\"");

  const json& nodes = rd.array(doc, "nodes");
  Hierarchy h;
  h.nodes.resize(nodes.size());
  std::vector<bool> seen(nodes.size(), false);
  std::vector<bool> has_quadric(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "].";
    const json& jn = nodes[i];
    const NodeId id = rd.index(rd.field(jn, "id", where), where + "id");
    if (id >= nodes.size() || seen[id]) throw ParseError(0, "field '" + where + "id' is not a dense unique id");
    seen[id] = true;
    Node& n = h.nodes[id];
    const json& ch = rd.field(jn, "children", where);
    if (!ch.is_null()) {
      if (!ch.is_array()) throw ParseError(0, "field '" + where + "children' must be null or an array");
      for (std::size_t c = 0; c < ch.size(); ++c) {
        const NodeId child = rd.index(ch[c], where + "children");
        if (child >= nodes.size()) throw ParseError(0, "field '" + where + "children' references unknown node");
        n.children.push_back(child);
      }
    }
    n.position = rd.vec<3>(rd.field(jn, "position", where), where + "position");
    const json& err = rd.field(jn, "error", where);
    if (!err.is_number()) throw ParseError(0, "field '" + where + "error' must be a number");
    n.error = err.get<double>();
    if (jn.contains("texcoord")) n.texcoord = rd.vec<2>(jn["texcoord"], where + "texcoord");
    if (jn.contains("normal")) n.normal = rd.vec<3>(jn["normal"], where + "normal");
    if (jn.contains("quadric")) {
      const json& q = jn["quadric"];
      if (!q.is_array() || q.size() != 10) throw ParseError(0, "field '" + where + "quadric' must hold 10 numbers");
      Quadric::Coefficients c{};
      for (std::size_t k = 0; k < 10; ++k) {
        if (!q[k].is_number()) throw ParseError(0, "field '" + where + "quadric' must hold numbers");
        c[k] = q[k].get<double>();
      }
      n.quadric = Quadric(c);
      has_quadric[id] = true;
    }
  }
  for (NodeId id = 0; id < h.size(); ++id) {
    for (auto c : h.nodes[id].children)
      if (!h.nodes[c].parent) h.nodes[c].parent = id;
  }

  OrderList order;
  for (const auto& e : rd.array(doc, "order")) {
    const NodeId id = rd.index(e, "order");
    if (id >= h.size()) throw ParseError(0, "field 'order' references unknown node " + std::to_string(id));
    order.push_back(id);
  }

  const json& leaf_map = rd.array(doc, "leaf_vertex_map");
  h.vertex_leaf.assign(leaf_map.size(), 0);
  std::vector<bool> mapped(leaf_map.size(), false);
  for (const auto& pair : leaf_map) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError(0, "field 'leaf_vertex_map' entries must be [leaf, vertex]");
    const NodeId leaf = rd.index(pair[0], "leaf_vertex_map");
    const std::uint32_t v = rd.index(pair[1], "leaf_vertex_map");
    if (leaf >= h.size()) throw ParseError(0, "field 'leaf_vertex_map' references unknown node " + std::to_string(leaf));
    if (v >= leaf_map.size() || mapped[v]) throw ParseError(0, "field 'leaf_vertex_map' has a bad vertex index");
    mapped[v] = true;
    h.vertex_leaf[v] = leaf;
  }

  for (const auto& jf : rd.array(doc, "faces")) {
    if (!jf.is_array() || jf.size() != 3) throw ParseError(0, "field 'faces' entries must be triples");
    Face f{};
    for (int c = 0; c < 3; ++c) {
      f[c] = rd.index(jf[c], "faces");
      if (f[c] >= h.vertex_leaf.size()) throw ParseError(0, "field 'faces' references unknown vertex");
    }
    h.faces.push_back(f);
  }

  // Files without stored quadrics get them rebuilt from the original surface.
  if (std::find(has_quadric.begin(), has_quadric.end(), false) != has_quadric.end()) {
    const Mesh original = leaf_mesh(h);
    const Adjacency adj(original);
    for (std::size_t v = 0; v < h.vertex_leaf.size(); ++v) {
      if (!has_quadric[h.vertex_leaf[v]])
        h.nodes[h.vertex_leaf[v]].quadric = vertex_quadric(original, adj, static_cast<VertexId>(v), cfg);
    }
    std::vector<bool> done(h.size(), false);
    std::function<const Quadric&(NodeId, int)> sum = [&](NodeId id, int depth) -> const Quadric& {
      Node& n = h.nodes[id];
      if (has_quadric[id] || n.is_leaf() || done[id] || depth > static_cast<int>(h.size())) return n.quadric;
      Quadric q;
      for (auto c : n.children) q += sum(c, depth + 1);
      n.quadric = q;
      done[id] = true;
      return n.quadric;
    };
    for (NodeId id = 0; id < h.size(); ++id) sum(id, 0);
  }
  return {std::move(h), std::move(order)};
}

}  // namespace semisimp
