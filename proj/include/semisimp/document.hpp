#pragma once

#include "semisimp/geom_edit.hpp"
#include "semisimp/repartition.hpp"
#include "semisimp/reorder.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace semisimp {

using Json = nlohmann::json;

inline constexpr std::string_view kScriptVersion = "semisimp-script/1";

/// State restored by one undo step.
struct UndoEntry {
  std::string op;
  std::optional<EditRecord> edit;          // vertex edits
  std::optional<Hierarchy> hierarchy;      // resimplification
  std::optional<OrderList> order;          // reordering and resimplification
  LodPosition lod = 0;
  std::optional<Patch> patch;
};

/// A hierarchy being edited: its order list, the viewed LOD position, the
/// pending patch and the undo history.
struct Document {
  Hierarchy hierarchy;
  OrderList order;
  LodPosition lod = 0;
  QuadricConfig config;
  std::optional<Patch> patch;
  std::vector<UndoEntry> undo;

  static Document build(const Mesh& mesh, const QuadricConfig& cfg = QuadricConfig{});
  static Document load(std::string_view hierarchy_json, const QuadricConfig& cfg = QuadricConfig{});

  Cut cut() const { return cut_at(hierarchy, order, lod); }
  CutMesh cut_mesh() const { return extract_mesh(hierarchy, cut()); }
};

/// A file produced by save_lod / save_hierarchy; `name` is relative to the output directory.
struct Output {
  std::string name;
  std::string contents;
};

/// What a command did, for callers that report back (the session).
struct CommandResult {
  Json info = Json::object();
  bool changed_cut = false;
};

/// Applies one edit-script command. Either the command succeeds or the
/// document is unchanged and Error is thrown. Saves append to `outputs`.
///
/// Commands (field "op"):
///   set_lod {lod}                     move_element {from, to}
///   local_simplify {nodes}            local_refine {nodes}
///   preserve_feature {nodes, to}      eliminate_feature {nodes, to}
///   vertex_edit {node, delta, radius?, falloff?, ancestors?, descendants?}
///   define_patch {nodes}              resimplify {}
///   undo {}                           save_lod {file}     save_hierarchy {file}
CommandResult apply_command(Document& doc, const Json& command, std::vector<Output>* outputs = nullptr,
                            const Progress& progress = {});

EditOptions parse_edit_options(const Json& command);
Json edit_options_json(const EditOptions& opts);

QuadricConfig parse_config(const Json& config);
Json config_json(const QuadricConfig& cfg);

/// Raised by replay_script; carries the index of the failing command (or -1
/// when the script itself is malformed).
class ScriptError : public Error {
 public:
  ScriptError(long index, const std::string& reason)
      : Error(index < 0 ? reason : "command " + std::to_string(index) + ": " + reason), index_(index) {}
  long index() const noexcept { return index_; }

 private:
  long index_;
};

struct Script {
  std::optional<QuadricConfig> config;
  std::vector<Json> commands;
};

Script parse_script(std::string_view text);
std::string script_text(const Script& script);

/// Applies every command in order and returns the outputs. Stops at the
/// first failing command with a ScriptError; nothing is returned then.
std::vector<Output> replay_script(Document& doc, const Script& script);

/// Output names must stay inside the output directory.
void check_output_name(const std::string& name);

}  // namespace semisimp
