#include "semisimp/engine.hpp"
#include "semisimp/geom_edit.hpp"

#include "oracles.hpp"
#include "shapes.hpp"

#include <doctest.h>

#include <cmath>

using namespace semisimp;

namespace {

// De Casteljau evaluation of the cubic with control values 1, a, b, 0.
double de_casteljau(double a, double b, double t) {
  double p[4] = {1.0, a, b, 0.0};
  for (int level = 3; level > 0; --level)
    for (int i = 0; i < level; ++i) p[i] = (1 - t) * p[i] + t * p[i + 1];
  return p[0];
}

struct Model {
  Hierarchy h;
  OrderList order;
};

Model model() {
  auto [h, order] = build_hierarchy(shapes::bumpy_torus(24, 18));
  return {std::move(h), std::move(order)};
}

NodeId interior_cut_node(const Model& m, LodPosition lod, std::size_t skip = 0) {
  for (auto id : cut_at(m.h, m.order, lod).nodes)
    if (!m.h.nodes[id].is_leaf() && skip-- == 0) return id;
  FAIL("no interior cut node");
  return 0;
}

}  // namespace

TEST_CASE("falloff weights follow the cubic profile") {
  for (const FalloffCurve& c : {FalloffCurve{}, FalloffCurve{0.7, 0.2}, FalloffCurve{1.0, 1.0}}) {
    for (int r = 1; r <= 6; ++r) {
      CHECK(falloff_weight(c, 0, r) == 1.0);
      CHECK(falloff_weight(c, r, r) == 0.0);
      CHECK(falloff_weight(c, r + 1, r) == 0.0);
      for (int i = 1; i < r; ++i)
        CHECK(falloff_weight(c, i, r) == doctest::Approx(de_casteljau(c.first, c.second, double(i) / r)));
    }
  }
  CHECK(falloff_weight(FalloffCurve{}, 0, 0) == 1.0);
  CHECK(falloff_weight(FalloffCurve{}, 1, 3) == doctest::Approx(20.0 / 27.0));
  CHECK(falloff_weight(FalloffCurve{3.0, 3.0}, 1, 2) == 1.25);
  CHECK(falloff_weight(FalloffCurve{-3.0, -3.0}, 1, 2) == -0.25);
  CHECK_THROWS_AS(falloff_weight(FalloffCurve{}, -1, 2), Error);
}

TEST_CASE("attenuation factor") {
  CHECK(attenuation_factor(0.0, 1.0) == 0.0);
  CHECK(attenuation_factor(1.0, 4.0) == doctest::Approx(0.5));
  CHECK(attenuation_factor(9.0, 4.0) == 1.0);
  CHECK(attenuation_factor(1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(attenuation_factor(-1.0, 1.0), Error);
}

TEST_CASE("local frames are orthonormal and right-handed") {
  const Model m = model();
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const LodPosition lod = std::uniform_int_distribution<std::size_t>(0, m.order.size() - 20)(rng);
    const Cut cut = cut_at(m.h, m.order, lod);
    const NodeId id = cut.nodes[std::uniform_int_distribution<std::size_t>(0, cut.size() - 1)(rng)];
    const LocalFrame f = local_frame(m.h, cut, id);
    CHECK(std::abs(f.x.norm() - 1) < 1e-9);
    CHECK(std::abs(f.y.norm() - 1) < 1e-9);
    CHECK(std::abs(f.z.norm() - 1) < 1e-9);
    CHECK(std::abs(f.x.dot(f.y)) < 1e-9);
    CHECK(std::abs(f.y.dot(f.z)) < 1e-9);
    CHECK(std::abs(f.x.dot(f.z)) < 1e-9);
    CHECK((f.x.cross(f.y) - f.z).norm() < 1e-9);
    const Vec3 p(0.3, -0.2, 0.9);
    CHECK((f.to_global(f.to_local(p)) - p).norm() < 1e-12);
  }
}

TEST_CASE("frames follow the documented construction on a flat sheet") {
  auto [h, order] = build_hierarchy(shapes::grid(4, 4));
  const Cut leaves = cut_at(h, order, 0);
  const LocalFrame f = local_frame(h, leaves, 5);
  CHECK(f.z.isApprox(Vec3(0, 0, 1)));
  CHECK(f.y.isApprox(Vec3(-1, -1, 0).normalized()));  // toward vertex 0, the lowest-id neighbor
  CHECK(f.x.isApprox(f.y.cross(f.z)));
}

TEST_CASE("degenerate frames fall back to fixed axes") {
  Mesh m;
  for (const Vec3& p : {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)}) m.vertices.push_back({p, std::nullopt, std::nullopt});
  m.faces = {{0, 1, 2}};  // zero area
  CutMesh cm{m, {0, 1, 2}};
  const LocalFrame f = local_frame(cm, Adjacency(cm.mesh), 1);
  CHECK(f.z == Vec3::UnitZ());
  CHECK(std::abs(f.x.cross(f.y).dot(f.z) - 1.0) < 1e-12);
}

TEST_CASE("the neighbor phase stays within the hop radius") {
  Model m = model();
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    Hierarchy h = m.h;
    const LodPosition lod = std::uniform_int_distribution<std::size_t>(0, m.order.size() - 50)(rng);
    const Cut cut = cut_at(h, m.order, lod);
    const NodeId id = cut.nodes[std::uniform_int_distribution<std::size_t>(0, cut.size() - 1)(rng)];
    EditOptions opts;
    opts.radius = std::uniform_int_distribution<int>(0, 4)(rng);
    const CutMesh cm = extract_mesh(h, cut);
    const auto within = oracle::hops(cm.mesh, *cm.vertex_of(id), opts.radius);
    const EditRecord rec = apply_vertex_edit(h, m.order, lod, id, Vec3(0.01, 0.02, -0.03), opts);
    for (NodeId x = 0; x < h.size(); ++x) {
      if (h.nodes[x].position == m.h.nodes[x].position) continue;
      const auto v = cm.vertex_of(x);
      REQUIRE(v);
      CHECK(within.count(*v) == 1);
      CHECK(within.at(*v) < std::max(opts.radius, 1));
    }
    CHECK(rec.moved_cut_nodes.front() <= id);
  }
}

TEST_CASE("the edited node moves by the full offset and neighbors by the falloff") {
  Model m = model();
  const LodPosition lod = m.order.size() / 2;
  const NodeId id = interior_cut_node(m, lod);
  const Vec3 delta(0.0, 0.0, 0.05);
  EditOptions opts;
  opts.radius = 3;
  const Cut cut = cut_at(m.h, m.order, lod);
  const CutMesh cm = extract_mesh(m.h, cut);
  const auto dist = oracle::hops(cm.mesh, *cm.vertex_of(id), 3);
  Hierarchy h = m.h;
  apply_vertex_edit(h, m.order, lod, id, delta, opts);
  for (const auto& [v, d] : dist) {
    const NodeId n = cm.nodes[v];
    const Vec3 want = m.h.nodes[n].position + falloff_weight(opts.falloff, d, 3) * delta;
    CHECK((h.nodes[n].position - want).norm() < 1e-15);
  }
}

TEST_CASE("attenuated edits never touch the leaves") {
  Model m = model();
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Hierarchy h = m.h;
    const LodPosition lod = std::uniform_int_distribution<std::size_t>(m.order.size() / 3, m.order.size() - 5)(rng);
    const NodeId id = interior_cut_node(m, lod, trial % 3);
    EditOptions opts;
    opts.radius = 2;
    opts.descendants = DescendantMode::attenuated;
    opts.ancestors = trial % 2 == 0;
    const EditRecord rec = apply_vertex_edit(h, m.order, lod, id, Vec3(0.05, -0.04, 0.03), opts);
    CHECK_FALSE(rec.moved_cut_nodes.empty());
    for (NodeId leaf = 0; leaf < h.leaf_count(); ++leaf) CHECK(h.nodes[leaf].position == m.h.nodes[leaf].position);
  }
  Hierarchy h = m.h;
  EditOptions opts;
  opts.descendants = DescendantMode::attenuated;
  CHECK_THROWS_AS(apply_vertex_edit(h, m.order, 0, 0, Vec3(1, 0, 0), opts), Error);
}

TEST_CASE("direct edits are reversible and a zero offset changes nothing") {
  Model m = model();
  const LodPosition lod = m.order.size() * 2 / 3;
  const NodeId id = interior_cut_node(m, lod);
  EditOptions opts;
  opts.radius = 3;
  opts.descendants = DescendantMode::direct;
  Hierarchy h = m.h;
  const Vec3 delta(0.04, 0.01, -0.02);
  apply_vertex_edit(h, m.order, lod, id, delta, opts);
  apply_vertex_edit(h, m.order, lod, id, -delta, opts);
  double worst = 0.0;
  for (NodeId x = 0; x < h.size(); ++x) worst = std::max(worst, (h.nodes[x].position - m.h.nodes[x].position).norm());
  CHECK(worst < 1e-7);

  Hierarchy same = m.h;
  apply_vertex_edit(same, m.order, lod, id, Vec3::Zero(), opts);
  for (NodeId x = 0; x < h.size(); ++x) CHECK(same.nodes[x].position == m.h.nodes[x].position);
}

TEST_CASE("descendants keep their offsets in the moved node's frame") {
  Model m = model();
  const LodPosition lod = m.order.size() * 2 / 3;
  const NodeId id = interior_cut_node(m, lod);
  const Cut cut = cut_at(m.h, m.order, lod);
  EditOptions opts;
  opts.descendants = DescendantMode::direct;
  const LocalFrame before = local_frame(m.h, cut, id);
  Hierarchy h = m.h;
  apply_vertex_edit(h, m.order, lod, id, Vec3(0.1, 0.0, 0.0), opts);
  const LocalFrame after = local_frame(h, cut, id);
  for (auto d : m.h.descendants(id))
    CHECK((after.to_local(h.nodes[d].position) - before.to_local(m.h.nodes[d].position)).norm() < 1e-12);
}

TEST_CASE("ancestor updates visit each ancestor once, children first") {
  Model m = model();
  const LodPosition lod = m.order.size() / 3;
  const NodeId id = interior_cut_node(m, lod);
  EditOptions opts;
  opts.radius = 2;
  opts.ancestors = true;
  Hierarchy h = m.h;
  const EditRecord rec = apply_vertex_edit(h, m.order, lod, id, Vec3(0.0, 0.05, 0.0), opts);
  std::set<NodeId> unique(rec.updated_ancestors.begin(), rec.updated_ancestors.end());
  CHECK(unique.size() == rec.updated_ancestors.size());
  const auto pos = order_positions(h, m.order);
  CHECK(std::is_sorted(rec.updated_ancestors.begin(), rec.updated_ancestors.end(),
                       [&](NodeId a, NodeId b) { return pos[a] < pos[b]; }));
  for (auto a : h.ancestors(id)) CHECK(unique.count(a) == 1);
  for (auto a : rec.updated_ancestors) {
    const Node& n = h.nodes[a];
    CHECK(n.quadric == h.nodes[n.children[0]].quadric + h.nodes[n.children[1]].quadric);
    CHECK(n.error >= 0.0);
  }
  CHECK(validate(h, m.order).empty());
}

TEST_CASE("undo restores every touched node exactly") {
  Model m = model();
  const LodPosition lod = m.order.size() / 2;
  const NodeId id = interior_cut_node(m, lod);
  EditOptions opts;
  opts.radius = 3;
  opts.ancestors = true;
  opts.descendants = DescendantMode::direct;
  Hierarchy h = m.h;
  const EditRecord rec = apply_vertex_edit(h, m.order, lod, id, Vec3(0.02, 0.03, 0.04), opts);
  undo_vertex_edit(h, rec);
  CHECK(save_hierarchy(h, m.order) == save_hierarchy(m.h, m.order));
}

TEST_CASE("edits require a node in the current cut") {
  Model m = model();
  Hierarchy h = m.h;
  CHECK_THROWS_AS(apply_vertex_edit(h, m.order, 0, m.order.back(), Vec3(1, 0, 0), EditOptions{}), Error);
}
