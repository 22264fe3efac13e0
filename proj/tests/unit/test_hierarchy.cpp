#include "semisimp/engine.hpp"

#include "oracles.hpp"
#include "shapes.hpp"

#include <doctest.h>
#include <json.hpp>

#include <set>

using namespace semisimp;

TEST_CASE("cuts agree with replaying the order list at every k") {
  for (const Mesh& m : {shapes::icosahedron(), shapes::grid(6, 5), shapes::uv_sphere(9, 7)}) {
    auto [h, order] = build_hierarchy(m);
    for (std::size_t k = 0; k <= order.size(); ++k) {
      const Cut cut = cut_at(h, order, k);
      const auto want = oracle::replay_cut(h, order, k);
      CHECK(std::set<NodeId>(cut.nodes.begin(), cut.nodes.end()) == want);
      CHECK(std::is_sorted(cut.nodes.begin(), cut.nodes.end()));
      CHECK(cut.size() == m.vertex_count() - k);
    }
    CHECK_THROWS_AS(cut_at(h, order, order.size() + 1), Error);
  }
}

TEST_CASE("cut owners cover every leaf once") {
  auto [h, order] = build_hierarchy(shapes::bumpy_torus(12, 10));
  for (std::size_t k : {std::size_t{0}, order.size() / 3, order.size() / 2, order.size()}) {
    const Cut cut = cut_at(h, order, k);
    const auto owners = cut_owners(h, cut);
    REQUIRE(owners.size() == h.leaf_count());
    for (std::size_t v = 0; v < owners.size(); ++v) {
      CHECK(cut.contains(owners[v]));
      CHECK(oracle::leaves_below(h, owners[v]).count(h.vertex_leaf[v]) == 1);
    }
  }
}

TEST_CASE("extracted meshes are the original at k = 0 and shrink with k") {
  const Mesh m = shapes::uv_sphere(10, 8);
  auto [h, order] = build_hierarchy(m);
  const CutMesh full = extract_mesh(h, cut_at(h, order, 0));
  CHECK(full.mesh.faces == m.faces);
  for (std::size_t v = 0; v < m.vertex_count(); ++v) CHECK(full.mesh.vertices[v].position == m.vertices[v].position);
  std::size_t last = full.mesh.face_count();
  for (std::size_t k = 1; k <= order.size(); ++k) {
    const CutMesh cm = extract_mesh(h, cut_at(h, order, k));
    CHECK(cm.mesh.face_count() <= last);
    CHECK(oracle::is_valid_surface(cm.mesh));
    CHECK(cm.mesh.vertex_count() == cm.nodes.size());
    last = cm.mesh.face_count();
  }
  const CutMesh cm = extract_mesh(h, cut_at(h, order, 5));
  for (std::size_t i = 0; i < cm.nodes.size(); ++i) CHECK(cm.vertex_of(cm.nodes[i]) == i);
  CHECK_FALSE(cm.vertex_of(order.back()));
}

TEST_CASE("LOD targeting by faces and vertices") {
  auto [h, order] = build_hierarchy(shapes::uv_sphere(16, 12));
  const std::size_t original = h.faces.size();
  CHECK(lod_for_faces(h, order, original) == 0);
  for (std::size_t budget : {std::size_t{100}, std::size_t{57}, std::size_t{200}}) {
    const LodPosition k = lod_for_faces(h, order, budget);
    CHECK(extract_mesh(h, cut_at(h, order, k)).mesh.face_count() <= budget);
    if (k > 0) CHECK(extract_mesh(h, cut_at(h, order, k - 1)).mesh.face_count() > budget);
  }
  CHECK(lod_for_vertices(h, order, 50) == h.leaf_count() - 50);
  CHECK(lod_for_vertices(h, order, h.leaf_count() + 10) == 0);
  CHECK(lod_for_faces(h, order, 0) == order.size());
}

TEST_CASE("validate reports each kind of damage") {
  auto [h, order] = build_hierarchy(shapes::grid(5, 5));
  REQUIRE(validate(h, order).empty());
  REQUIRE(order.size() > 3);

  SUBCASE("child after parent") {
    OrderList bad = order;
    const NodeId top = order.back();
    const NodeId child = h.nodes[top].children[0];
    if (h.nodes[child].is_leaf()) return;
    std::swap(*std::find(bad.begin(), bad.end(), child), bad.back());
    CHECK(count(validate(h, bad), ViolationKind::linear_extension) >= 1);
  }
  SUBCASE("missing and duplicated elements") {
    OrderList bad = order;
    bad.back() = bad.front();
    const auto report = validate(h, bad);
    CHECK(count(report, ViolationKind::order_membership) == 2);
  }
  SUBCASE("leaf in the order list") {
    OrderList bad = order;
    bad.push_back(0);
    CHECK(count(validate(h, bad), ViolationKind::order_membership) == 1);
  }
  SUBCASE("one-child node") {
    Hierarchy bad = h;
    bad.nodes[order.front()].children.pop_back();
    CHECK(count(validate(bad, order), ViolationKind::forest_shape) >= 1);
  }
  SUBCASE("leaf error") {
    Hierarchy bad = h;
    bad.nodes[0].error = 0.5;
    CHECK(count(validate(bad, order), ViolationKind::leaf_error) == 1);
  }
  SUBCASE("leaf map") {
    Hierarchy bad = h;
    bad.vertex_leaf[1] = bad.vertex_leaf[0];
    CHECK(count(validate(bad, order), ViolationKind::leaf_map) >= 1);
  }
}

TEST_CASE("hierarchy files round-trip bit-exactly") {
  Mesh m = shapes::bumpy_torus(10, 8);
  for (auto& v : m.vertices) v.texcoord = Vec2(v.position.x() / 3, v.position.y() / 7);
  auto [h, order] = build_hierarchy(m);
  const std::string text = save_hierarchy(h, order);
  auto [h2, o2] = load_hierarchy(text);
  CHECK(o2 == order);
  REQUIRE(h2.size() == h.size());
  for (NodeId id = 0; id < h.size(); ++id) {
    CHECK(h2.nodes[id].position == h.nodes[id].position);
    CHECK(h2.nodes[id].error == h.nodes[id].error);
    CHECK(h2.nodes[id].quadric == h.nodes[id].quadric);
    CHECK(h2.nodes[id].parent == h.nodes[id].parent);
    CHECK(h2.nodes[id].texcoord == h.nodes[id].texcoord);
  }
  CHECK(save_hierarchy(h2, o2) == text);
}

TEST_CASE("files without quadrics get them rebuilt") {
  auto [h, order] = build_hierarchy(shapes::uv_sphere(8, 6));
  auto doc = nlohmann::json::parse(save_hierarchy(h, order));
  for (auto& n : doc["nodes"]) n.erase("quadric");
  auto [h2, o2] = load_hierarchy(doc.dump());
  for (NodeId id = 0; id < h.size(); ++id) {
    const auto& a = h.nodes[id].quadric.coefficients();
    const auto& b = h2.nodes[id].quadric.coefficients();
    for (int i = 0; i < 10; ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12));
  }
}

TEST_CASE("malformed hierarchy files name the problem") {
  auto [h, order] = build_hierarchy(shapes::grid(3, 3));
  auto doc = nlohmann::json::parse(save_hierarchy(h, order));
  auto expect = [](const nlohmann::json& d, const std::string& needle) {
    try {
      load_hierarchy(d.dump());
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  auto v = doc;
  v["version"] = "other/9";
  expect(v, "version");
  auto missing = doc;
  missing.erase("order");
  expect(missing, "order");
  auto unknown = doc;
  unknown["order"].push_back(999);
  expect(unknown, "unknown node");
  auto pos = doc;
  pos["nodes"][0]["position"] = {1, 2};
  expect(pos, "position");
  CHECK_THROWS_AS(load_hierarchy("not json"), ParseError);
}
