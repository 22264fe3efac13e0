#include "semisimp/document.hpp"

#include "semisimp/obj_io.hpp"

#include <filesystem>

namespace semisimp {

namespace {

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object()) throw Error("expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw Error(std::string("missing field '") + name + "'");
  return *it;
}

std::size_t get_index(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw Error(std::string("field '") + name + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<NodeId> get_nodes(const Json& obj, const char* name, const Hierarchy& h) {
  const Json& v = field(obj, name);
  if (!v.is_array()) throw Error(std::string("field '") + name + "' must be an array of node ids");
  std::vector<NodeId> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<long long>() < 0 || static_cast<std::size_t>(x.get<long long>()) >= h.size())
      throw Error("invalid node id " + x.dump());
    out.push_back(x.get<NodeId>());
  }
  return out;
}

Vec3 get_vec3(const Json& v, const char* name) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
    throw Error(std::string("field '") + name + "' must be three numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Json node_list(const std::vector<NodeId>& ids) { return Json(ids); }

}  // namespace

Document Document::build(const Mesh& mesh, const QuadricConfig& cfg) {
  Document doc;
  auto [h, order] = build_hierarchy(mesh, cfg);
  doc.hierarchy = std::move(h);
  doc.order = std::move(order);
  doc.config = cfg;
  return doc;
}

Document Document::load(std::string_view hierarchy_json, const QuadricConfig& cfg) {
  Document doc;
  auto [h, order] = load_hierarchy(hierarchy_json, cfg);
  doc.hierarchy = std::move(h);
  doc.order = std::move(order);
  doc.config = cfg;
  return doc;
}

EditOptions parse_edit_options(const Json& c) {
  EditOptions opts;
  if (c.contains("radius")) {
    const Json& r = c["radius"];
    if (!r.is_number_integer() || r.get<long long>() < 0) throw Error("field 'radius' must be a nonnegative integer");
    opts.radius = r.get<int>();
  }
  if (c.contains("falloff")) {
    const Json& f = c["falloff"];
    if (!f.is_array() || f.size() != 2 || !f[0].is_number() || !f[1].is_number())
      throw Error("field 'falloff' must be two numbers");
    opts.falloff = {f[0].get<double>(), f[1].get<double>()};
  }
  if (c.contains("ancestors")) {
    if (!c["ancestors"].is_boolean()) throw Error("field 'ancestors' must be a boolean");
    opts.ancestors = c["ancestors"].get<bool>();
  }
  if (c.contains("descendants")) {
    const Json& d = c["descendants"];
    const std::string s = d.is_string() ? d.get<std::string>() : "";
    if (s == "off")
      opts.descendants = DescendantMode::off;
    else if (s == "direct")
      opts.descendants = DescendantMode::direct;
    else if (s == "attenuated")
      opts.descendants = DescendantMode::attenuated;
    else
      throw Error("field 'descendants' must be off, direct or attenuated");
  }
  return opts;
}

Json edit_options_json(const EditOptions& opts) {
  static const char* modes[] = {"off", "direct", "attenuated"};
  return Json{{"radius", opts.radius},
              {"falloff", {opts.falloff.first, opts.falloff.second}},
              {"ancestors", opts.ancestors},
              {"descendants", modes[static_cast<int>(opts.descendants)]}};
}

QuadricConfig parse_config(const Json& c) {
  QuadricConfig cfg;
  if (!c.is_object()) throw Error("config must be an object");
  if (c.contains("boundary_weight")) {
    if (!c["boundary_weight"].is_number() || c["boundary_weight"].get<double>() < 0)
      throw Error("config 'boundary_weight' must be a nonnegative number");
    cfg.boundary_weight = c["boundary_weight"].get<double>();
  }
  if (c.contains("placement")) {
    const std::string p = c["placement"].is_string() ? c["placement"].get<std::string>() : "";
    if (p == "optimal")
      cfg.placement = PlacementPolicy::optimal;
    else if (p == "subset")
      cfg.placement = PlacementPolicy::subset;
    else
      throw Error("config 'placement' must be optimal or subset");
  }
  return cfg;
}

Json config_json(const QuadricConfig& cfg) {
  return Json{{"boundary_weight", cfg.boundary_weight},
              {"placement", cfg.placement == PlacementPolicy::optimal ? "optimal" : "subset"}};
}

void check_output_name(const std::string& name) {
  const std::filesystem::path p(name);
  if (name.empty() || p.is_absolute() || p.has_root_name()) throw Error("output name '" + name + "' must be a relative path");
  for (const auto& part : p)
    if (part == "..") throw Error("output name '" + name + "' leaves the output directory");
}

CommandResult apply_command(Document& doc, const Json& c, std::vector<Output>* outputs, const Progress& progress) {
  if (!c.is_object()) throw Error("command must be an object");
  const Json& opv = field(c, "op");
  if (!opv.is_string()) throw Error("field 'op' must be a string");
  const std::string op = opv.get<std::string>();
  const Hierarchy& h = doc.hierarchy;
  CommandResult res;

  auto snapshot = [&](bool with_order) {
    UndoEntry e;
    e.op = op;
    if (with_order) e.order = doc.order;
    e.lod = doc.lod;
    e.patch = doc.patch;
    return e;
  };

  if (op == "set_lod") {
    const std::size_t k = get_index(c, "lod");
    if (k > doc.order.size())
      throw Error("LOD position " + std::to_string(k) + " beyond " + std::to_string(doc.order.size()) + " collapses");
    doc.lod = k;
    res.changed_cut = true;
  } else if (op == "move_element") {
    const std::size_t from = get_index(c, "from");
    const std::size_t to = get_index(c, "to");
    OrderList next = move_element(doc.order, h, from, to);
    doc.undo.push_back(snapshot(true));
    doc.order = std::move(next);
    res.changed_cut = true;
  } else if (op == "local_simplify" || op == "local_refine") {
    const auto nodes = get_nodes(c, "nodes", h);
    if (nodes.empty()) throw Error("empty selection");
    LodEdit edit = op == "local_simplify" ? local_simplify(h, doc.order, doc.lod, nodes)
                                          : local_refine(h, doc.order, doc.lod, nodes);
    doc.undo.push_back(snapshot(true));
    doc.order = std::move(edit.order);
    doc.lod = edit.lod;
    res.info["lod"] = doc.lod;
    res.changed_cut = true;
  } else if (op == "preserve_feature" || op == "eliminate_feature") {
    const auto nodes = get_nodes(c, "nodes", h);
    if (nodes.empty()) throw Error("empty selection");
    const std::size_t to = get_index(c, "to");
    if (to > doc.order.size()) throw Error("LOD position " + std::to_string(to) + " out of range");
    OrderList next = op == "preserve_feature" ? preserve_feature(h, doc.order, doc.lod, to, nodes)
                                              : eliminate_feature(h, doc.order, doc.lod, to, nodes);
    doc.undo.push_back(snapshot(true));
    doc.order = std::move(next);
    doc.lod = to;
    res.info["lod"] = doc.lod;
    res.changed_cut = true;
  } else if (op == "vertex_edit") {
    const std::size_t m = get_index(c, "node");
    if (m >= h.size()) throw Error("invalid node id " + std::to_string(m));
    const Vec3 delta = get_vec3(field(c, "delta"), "delta");
    const EditOptions opts = parse_edit_options(c);
    EditRecord rec = apply_vertex_edit(doc.hierarchy, doc.order, doc.lod, static_cast<NodeId>(m), delta, opts, doc.config);
    res.info["moved"] = node_list(rec.moved_cut_nodes);
    res.info["descendants"] = rec.moved_descendants.size();
    res.info["ancestors"] = rec.updated_ancestors.size();
    UndoEntry e = snapshot(false);
    e.edit = std::move(rec);
    doc.undo.push_back(std::move(e));
    res.changed_cut = true;
  } else if (op == "define_patch") {
    const auto nodes = get_nodes(c, "nodes", h);
    Patch p = define_patch(h, doc.order, doc.lod, nodes);
    res.info["nodes"] = node_list(p.nodes);
    res.info["boundary"] = p.boundary.size();
    doc.undo.push_back(snapshot(false));
    doc.patch = std::move(p);
  } else if (op == "resimplify") {
    if (!doc.patch) throw Error("no patch defined");
    Resimplified r = resimplify_segmented(h, doc.order, doc.lod, *doc.patch, doc.config, progress);
    UndoEntry e = snapshot(true);
    e.hierarchy = std::move(doc.hierarchy);
    doc.undo.push_back(std::move(e));
    doc.hierarchy = std::move(r.hierarchy);
    doc.order = std::move(r.order);
    doc.patch.reset();
    res.info["patch_root"] = r.patch_root;
    res.info["patch_collapses"] = r.patch_phase.size();
    res.info["order_length"] = doc.order.size();
    res.changed_cut = true;
  } else if (op == "undo") {
    if (doc.undo.empty()) throw Error("nothing to undo");
    UndoEntry e = std::move(doc.undo.back());
    doc.undo.pop_back();
    if (e.edit) undo_vertex_edit(doc.hierarchy, *e.edit);
    if (e.hierarchy) doc.hierarchy = std::move(*e.hierarchy);
    if (e.order) doc.order = std::move(*e.order);
    doc.lod = e.lod;
    doc.patch = std::move(e.patch);
    res.info["undone"] = e.op;
    res.changed_cut = true;
  } else if (op == "save_lod" || op == "save_hierarchy") {
    const Json& f = field(c, "file");
    if (!f.is_string()) throw Error("field 'file' must be a string");
    const std::string name = f.get<std::string>();
    check_output_name(name);
    std::string text = op == "save_lod" ? save_obj(doc.cut_mesh().mesh) : save_hierarchy(doc.hierarchy, doc.order);
    if (outputs) outputs->push_back({name, std::move(text)});
  } else {
    throw Error("unknown op '" + op + "'");
  }
  return res;
}

Script parse_script(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ScriptError(-1, std::string("script is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScriptError(-1, "script must be a JSON object");
  if (!doc.contains("version") || doc["version"] != kScriptVersion)
    throw ScriptError(-1, "script version must be \"" + std::string(kScriptVersion) + "\"");
  Script s;
  if (doc.contains("config")) {
    try {
      s.config = parse_config(doc["config"]);
    } catch (const Error& e) {
      throw ScriptError(-1, e.what());
    }
  }
  if (!doc.contains("commands") || !doc["commands"].is_array()) throw ScriptError(-1, "script needs a 'commands' array");
  for (const auto& c : doc["commands"]) s.commands.push_back(c);
  return s;
}

std::string script_text(const Script& script) {
  Json doc{{"version", kScriptVersion}};
  if (script.config) doc["config"] = config_json(*script.config);
  doc["commands"] = script.commands;
  return doc.dump(1) + "\n";
}

std::vector<Output> replay_script(Document& doc, const Script& script) {
  std::vector<Output> outputs;
  for (std::size_t i = 0; i < script.commands.size(); ++i) {
    try {
      apply_command(doc, script.commands[i], &outputs);
    } catch (const Error& e) {
      throw ScriptError(static_cast<long>(i), e.what());
    }
  }
  return outputs;
}

}  // namespace semisimp
