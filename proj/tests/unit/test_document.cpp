#include "semisimp/document.hpp"
#include "semisimp/obj_io.hpp"

#include "shapes.hpp"

#include <doctest.h>

using namespace semisimp;

namespace {

std::string snapshot(const Document& d) {
  return save_hierarchy(d.hierarchy, d.order) + std::to_string(d.lod) + (d.patch ? "p" : "-");
}

Json cmd(Json j) { return j; }

}  // namespace

TEST_CASE("an empty script with a save reproduces the plain build") {
  const Mesh m = shapes::bumpy_torus(12, 9);
  Document doc = Document::build(m);
  const Script s = parse_script(R"({"version":"semisimp-script/1","commands":[{"op":"save_hierarchy","file":"h.json"}]})");
  const auto out = replay_script(doc, s);
  REQUIRE(out.size() == 1);
  auto [h, order] = build_hierarchy(m);
  CHECK(out[0].name == "h.json");
  CHECK(out[0].contents == save_hierarchy(h, order));
}

TEST_CASE("every command applies, and undo restores the previous state") {
  const Mesh m = shapes::bumpy_torus(14, 10);
  Document doc = Document::build(m);
  const std::size_t n = doc.order.size();
  apply_command(doc, cmd({{"op", "set_lod"}, {"lod", n / 2}}));
  CHECK(doc.lod == n / 2);

  auto step = [&](const Json& c) {
    CAPTURE(c.dump());
    const std::string before = snapshot(doc);
    Document probe = doc;
    apply_command(probe, c);
    CHECK(validate(probe.hierarchy, probe.order).empty());
    CHECK(snapshot(probe) != before);
    apply_command(probe, cmd({{"op", "undo"}}));
    CHECK(snapshot(probe) == before);
    apply_command(doc, c);
  };
  auto interior = [&] {
    NodeId pick = 0;
    for (auto id : doc.cut().nodes)
      if (!doc.hierarchy.nodes[id].is_leaf()) pick = id;
    return pick;
  };

  step({{"op", "local_simplify"}, {"nodes", {doc.cut().nodes[0]}}});
  const NodeId node = interior();
  step({{"op", "vertex_edit"},
        {"node", node},
        {"delta", {0.01, 0.02, 0.0}},
        {"radius", 2},
        {"falloff", {1.0, 0.0}},
        {"ancestors", true},
        {"descendants", "direct"}});
  step({{"op", "preserve_feature"}, {"nodes", {node}}, {"to", doc.lod + 10}});
  step({{"op", "define_patch"}, {"nodes", {node}}});
  step({{"op", "resimplify"}});
  step({{"op", "local_refine"}, {"nodes", {node}}});
  step({{"op", "move_element"}, {"from", 3}, {"to", doc.order.size() - 4}});
  CHECK(doc.undo.size() == 7);
}

TEST_CASE("failed commands leave the document unchanged") {
  Document doc = Document::build(shapes::grid(6, 6));
  apply_command(doc, cmd({{"op", "set_lod"}, {"lod", 4}}));
  const std::string before = snapshot(doc);
  const std::vector<Json> bad = {
      {{"op", "set_lod"}, {"lod", 100000}},
      {{"op", "set_lod"}, {"lod", -1}},
      {{"op", "move_element"}, {"from", 0}},
      {{"op", "local_simplify"}, {"nodes", {doc.order.back()}}},
      {{"op", "local_refine"}, {"nodes", {0}}},
      {{"op", "eliminate_feature"}, {"nodes", {0}}, {"to", 9}},
      {{"op", "vertex_edit"}, {"node", doc.order.back()}, {"delta", {1, 0, 0}}},
      {{"op", "vertex_edit"}, {"node", 0}, {"delta", {1, 0}}},
      {{"op", "vertex_edit"}, {"node", 0}, {"delta", {1, 0, 0}}, {"descendants", "sideways"}},
      {{"op", "define_patch"}, {"nodes", {0, 35}}},
      {{"op", "resimplify"}},
      {{"op", "undo"}},
      {{"op", "save_lod"}, {"file", "../escape.obj"}},
      {{"op", "fly"}},
      {{"nodes", {1}}},
  };
  for (const auto& c : bad) {
    CAPTURE(c.dump());
    CHECK_THROWS_AS(apply_command(doc, c), Error);
    CHECK(snapshot(doc) == before);
  }
}

TEST_CASE("replay reports the failing command and produces nothing") {
  Document doc = Document::build(shapes::grid(5, 5));
  Script s;
  s.commands = {Json{{"op", "save_lod"}, {"file", "a.obj"}}, Json{{"op", "set_lod"}, {"lod", 1}},
                Json{{"op", "local_refine"}, {"nodes", {0}}}};
  try {
    replay_script(doc, s);
    FAIL("expected an error");
  } catch (const ScriptError& e) {
    CHECK(e.index() == 2);
    CHECK(std::string(e.what()).find("command 2") == 0);
  }
}

TEST_CASE("scripts parse, print and reject bad versions") {
  const Script s = parse_script(
      R"({"version":"semisimp-script/1","config":{"boundary_weight":10,"placement":"subset"},"commands":[{"op":"set_lod","lod":3}]})");
  REQUIRE(s.config);
  CHECK(s.config->boundary_weight == 10.0);
  CHECK(s.config->placement == PlacementPolicy::subset);
  CHECK(s.commands.size() == 1);
  const Script again = parse_script(script_text(s));
  CHECK(again.commands == s.commands);
  CHECK_THROWS_AS(parse_script(R"({"version":"semisimp-script/0","commands":[]})"), ScriptError);
  CHECK_THROWS_AS(parse_script(R"({"version":"semisimp-script/1"})"), ScriptError);
  CHECK_THROWS_AS(parse_script("[]"), ScriptError);
  CHECK_THROWS_AS(parse_script("{"), ScriptError);
}

TEST_CASE("output names stay inside the output directory") {
  CHECK_NOTHROW(check_output_name("lod/a.obj"));
  CHECK_THROWS_AS(check_output_name("/tmp/a.obj"), Error);
  CHECK_THROWS_AS(check_output_name("a/../../b"), Error);
  CHECK_THROWS_AS(check_output_name(""), Error);
}

TEST_CASE("save_lod writes the current cut") {
  Document doc = Document::build(shapes::uv_sphere(10, 8));
  std::vector<Output> out;
  apply_command(doc, cmd({{"op", "set_lod"}, {"lod", 30}}));
  apply_command(doc, cmd({{"op", "save_lod"}, {"file", "x.obj"}}), &out);
  REQUIRE(out.size() == 1);
  CHECK(load_obj(out[0].contents).vertex_count() == doc.hierarchy.leaf_count() - 30);
}

TEST_CASE("edit options round-trip through JSON") {
  EditOptions o;
  o.radius = 4;
  o.falloff = {0.25, 0.5};
  o.ancestors = true;
  o.descendants = DescendantMode::attenuated;
  const EditOptions back = parse_edit_options(edit_options_json(o));
  CHECK(back.radius == 4);
  CHECK(back.falloff.first == 0.25);
  CHECK(back.falloff.second == 0.5);
  CHECK(back.ancestors);
  CHECK(back.descendants == DescendantMode::attenuated);
}
