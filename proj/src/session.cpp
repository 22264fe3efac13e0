#include "semisimp/session.hpp"

#include "semisimp/log.hpp"
#include "semisimp/obj_io.hpp"

#include <algorithm>

namespace semisimp {

namespace {

class RequestError : public Error {
 public:
  RequestError(std::string code, const std::string& what) : Error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

Json error_response(const Json& id, const std::string& code, const std::string& message) {
  return Json{{"id", id}, {"error", {{"code", code}, {"message", message}}}};
}

bool is_hierarchy_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

}  // namespace

Session::Session(Emit emit) : emit_(std::move(emit)) {}

void Session::preload(Document doc) {
  script_ = Script{};
  script_.config = doc.config;
  selection_.clear();
  doc_ = std::move(doc);
}

Document& Session::doc() {
  if (!doc_) throw RequestError("no_model", "no model loaded");
  return *doc_;
}

void Session::request_cancel(std::optional<long long> request) {
  if (request) {
    std::lock_guard lock(cancel_mutex_);
    cancelled_requests_.insert(*request);
  }
  cancel_current_ = true;
}

void Session::handle_line(std::string_view line) {
  Json msg;
  try {
    msg = Json::parse(line);
  } catch (const Json::parse_error& e) {
    emit_(error_response(nullptr, "bad_request", std::string("malformed JSON: ") + e.what()));
    return;
  }
  handle(msg);
}

void Session::handle(const Json& msg) {
  if (!msg.is_object() || !msg.contains("id") || !msg["id"].is_number_integer() || !msg.contains("kind") ||
      !msg["kind"].is_string()) {
    const Json id = msg.is_object() && msg.contains("id") ? msg["id"] : Json(nullptr);
    emit_(error_response(id, "bad_request", "a request needs an integer id and a string kind"));
    return;
  }
  const long long id = msg["id"].get<long long>();
  const std::string kind = msg["kind"].get<std::string>();
  const Json payload = msg.contains("payload") ? msg["payload"] : Json::object();
  if (!payload.is_object()) {
    emit_(error_response(id, "bad_request", "payload must be an object"));
    return;
  }
  if (!greeted_ && kind != "hello") {
    emit_(error_response(id, "handshake", "the first message must be hello"));
    return;
  }
  try {
    Json result = dispatch(id, kind, payload);
    const bool changed = result.is_object() && result.contains("_cut_changed");
    if (changed) result.erase("_cut_changed");
    emit_(Json{{"id", id}, {"result", std::move(result)}});
    if (changed) emit_(Json{{"id", 0}, {"kind", "cut_changed"}, {"payload", cut_json()}});
  } catch (const RequestError& e) {
    emit_(error_response(id, e.code(), e.what()));
  } catch (const Cancelled& e) {
    emit_(error_response(id, "cancelled", e.what()));
  } catch (const std::exception& e) {
    emit_(error_response(id, "invalid", e.what()));
  }
}

std::vector<NodeId> Session::selection_or(const Json& payload) const {
  if (payload.contains("nodes")) {
    if (!payload["nodes"].is_array()) throw RequestError("bad_request", "'nodes' must be an array");
    std::vector<NodeId> out;
    for (const auto& x : payload["nodes"]) {
      if (!x.is_number_integer() || x.get<long long>() < 0) throw RequestError("bad_request", "invalid node id " + x.dump());
      out.push_back(x.get<NodeId>());
    }
    return out;
  }
  const Cut cut = doc_->cut();
  std::vector<NodeId> out;
  for (auto id : selection_)
    if (cut.contains(id)) out.push_back(id);
  if (out.empty()) throw RequestError("invalid", "nothing selected");
  return out;
}

Json Session::cut_json() const {
  const CutMesh cm = doc_->cut_mesh();
  Json positions = Json::array();
  for (const auto& v : cm.mesh.vertices) positions.push_back({v.position.x(), v.position.y(), v.position.z()});
  Json selected = Json::array();
  for (auto id : cm.nodes) selected.push_back(std::binary_search(selection_.begin(), selection_.end(), id));
  return Json{{"lod", doc_->lod},          {"order_length", doc_->order.size()},
              {"nodes", cm.nodes},         {"positions", std::move(positions)},
              {"faces", cm.mesh.faces},    {"selected", std::move(selected)}};
}

Json Session::run_command(const Json& command, long long request) {
  Document& d = doc();
  Progress progress;
  if (command["op"] == "resimplify") {
    cancel_current_ = false;
    const std::size_t stride = std::max<std::size_t>(1, d.cut().size() / 100);
    progress = [this, request, stride](std::size_t done, std::size_t total) {
      if (done % stride == 0 || done == total)
        emit_(Json{{"id", 0},
                   {"kind", "progress"},
                   {"payload", {{"request", request}, {"done", done}, {"total", total}}}});
      if (cancel_current_) return false;
      std::lock_guard lock(cancel_mutex_);
      return cancelled_requests_.count(request) == 0;
    };
  }
  CommandResult r = apply_command(d, command, nullptr, progress);
  script_.commands.push_back(command);
  Json out = std::move(r.info);
  out["lod"] = d.lod;
  if (r.changed_cut) out["_cut_changed"] = true;
  return out;
}

Json Session::dispatch(long long id, const std::string& kind, const Json& payload) {
  static const std::set<std::string> known = {
      "hello",        "cancel",       "load_model",     "get_cut",        "select",
      "set_lod",      "move_element", "local_simplify", "local_refine",   "define_patch",
      "preserve_feature", "eliminate_feature", "resimplify", "undo",     "move_vertex",
      "save_hierarchy",   "save_lod",  "record_script"};
  if (!known.count(kind)) throw RequestError("unknown_kind", "unknown message kind '" + kind + "'");
  if (kind == "hello") {
    if (payload.contains("version") && payload["version"] != kSessionVersion)
      throw RequestError("version", "unsupported protocol version " + payload["version"].dump());
    greeted_ = true;
    return Json{{"version", kSessionVersion}, {"server", "semisimp"}};
  }
  if (kind == "cancel") {
    std::optional<long long> target;
    if (payload.contains("request") && payload["request"].is_number_integer())
      target = payload["request"].get<long long>();
    request_cancel(target);
    return Json{{"requested", true}};
  }
  if (kind == "load_model") {
    QuadricConfig cfg = payload.contains("config") ? parse_config(payload["config"]) : QuadricConfig{};
    std::optional<Document> next;
    if (payload.contains("path")) {
      const std::string path = payload["path"].get<std::string>();
      std::string text;
      try {
        text = read_text_file(path);
      } catch (const std::exception& e) {
        throw RequestError("io", e.what());
      }
      next = is_hierarchy_path(path) ? Document::load(text, cfg) : Document::build(load_obj(text), cfg);
    } else if (payload.contains("obj")) {
      next = Document::build(load_obj(payload["obj"].get<std::string>()), cfg);
    } else if (payload.contains("hierarchy")) {
      next = Document::load(payload["hierarchy"].get<std::string>(), cfg);
    } else {
      throw RequestError("bad_request", "load_model needs path, obj or hierarchy");
    }
    doc_ = std::move(next);
    selection_.clear();
    script_ = Script{};
    script_.config = cfg;
    return Json{{"nodes", doc_->hierarchy.size()},
                {"leaves", doc_->hierarchy.leaf_count()},
                {"order_length", doc_->order.size()},
                {"lod", doc_->lod},
                {"_cut_changed", true}};
  }

  Document& d = doc();
  if (kind == "get_cut") return cut_json();
  if (kind == "select") {
    const std::string mode = payload.value("mode", "replace");
    std::vector<NodeId> ids = selection_or(payload.contains("nodes") ? payload : Json{{"nodes", Json::array()}});
    const Cut cut = d.cut();
    for (auto x : ids)
      if (!cut.contains(x)) throw RequestError("invalid", "node " + std::to_string(x) + " is not in the cut");
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<NodeId> next;
    if (mode == "replace")
      next = ids;
    else if (mode == "add")
      std::set_union(selection_.begin(), selection_.end(), ids.begin(), ids.end(), std::back_inserter(next));
    else if (mode == "remove")
      std::set_difference(selection_.begin(), selection_.end(), ids.begin(), ids.end(), std::back_inserter(next));
    else
      throw RequestError("bad_request", "select mode must be replace, add or remove");
    selection_ = std::move(next);
    return Json{{"selected", selection_}};
  }
  if (kind == "set_lod") {
    if (!payload.contains("lod") && payload.contains("vertices")) {
      const auto n = payload["vertices"].get<std::size_t>();
      return run_command(Json{{"op", "set_lod"}, {"lod", lod_for_vertices(d.hierarchy, d.order, n)}}, id);
    }
    return run_command(Json{{"op", "set_lod"}, {"lod", payload.value("lod", Json())}}, id);
  }
  if (kind == "move_element")
    return run_command(Json{{"op", kind}, {"from", payload.value("from", Json())}, {"to", payload.value("to", Json())}},
                       id);
  if (kind == "local_simplify" || kind == "local_refine" || kind == "define_patch")
    return run_command(Json{{"op", kind}, {"nodes", selection_or(payload)}}, id);
  if (kind == "preserve_feature" || kind == "eliminate_feature")
    return run_command(Json{{"op", kind}, {"nodes", selection_or(payload)}, {"to", payload.value("to", Json())}}, id);
  if (kind == "resimplify") return run_command(Json{{"op", "resimplify"}}, id);
  if (kind == "undo") return run_command(Json{{"op", "undo"}}, id);
  if (kind == "move_vertex") {
    Json command = edit_options_json(parse_edit_options(payload));
    command["op"] = "vertex_edit";
    command["node"] = payload.value("node", Json());
    command["delta"] = payload.value("delta", Json());
    const std::string phase = payload.value("phase", "commit");
    if (phase == "commit") return run_command(command, id);
    if (phase != "preview") throw RequestError("bad_request", "move_vertex phase must be preview or commit");
    // Previews run against the document and are rolled back exactly.
    if (!command["node"].is_number_integer() || command["node"].get<long long>() < 0 ||
        command["node"].get<std::size_t>() >= d.hierarchy.size())
      throw RequestError("bad_request", "invalid node id");
    const auto& delta = command["delta"];
    if (!delta.is_array() || delta.size() != 3) throw RequestError("bad_request", "'delta' must be three numbers");
    EditRecord rec =
        apply_vertex_edit(d.hierarchy, d.order, d.lod, command["node"].get<NodeId>(),
                          Vec3(delta[0].get<double>(), delta[1].get<double>(), delta[2].get<double>()),
                          parse_edit_options(payload), d.config);
    Json moved = Json::array();
    for (auto n : rec.moved_cut_nodes) {
      const Vec3& p = d.hierarchy.nodes[n].position;
      moved.push_back({{"node", n}, {"position", {p.x(), p.y(), p.z()}}});
    }
    undo_vertex_edit(d.hierarchy, rec);
    return Json{{"preview", std::move(moved)}};
  }
  if (kind == "save_hierarchy" || kind == "save_lod") {
    std::string text = kind == "save_lod" ? save_obj(d.cut_mesh().mesh) : save_hierarchy(d.hierarchy, d.order);
    if (payload.contains("path")) {
      try {
        write_text_file(payload["path"].get<std::string>(), text);
      } catch (const std::exception& e) {
        throw RequestError("io", e.what());
      }
      return Json{{"written", payload["path"]}};
    }
    return Json{{"text", std::move(text)}};
  }
  if (kind == "record_script") return Json{{"script", Json::parse(script_text(script_))}};
  throw RequestError("unknown_kind", "unknown message kind '" + kind + "'");
}

}  // namespace semisimp
