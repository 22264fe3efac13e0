#include "cli.hpp"

#include "semisimp/document.hpp"
#include "semisimp/log.hpp"
#include "semisimp/obj_io.hpp"
#include "semisimp/transport.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

namespace semisimp {

namespace {

namespace fs = std::filesystem;

bool is_hierarchy_file(const fs::path& p) { return p.extension() == ".json"; }

Document open_model(const fs::path& path, const QuadricConfig& cfg) {
  if (is_hierarchy_file(path)) return Document::load(read_text_file(path), cfg);
  return Document::build(read_obj_file(path), cfg);
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge-collapse simplification hierarchies with interactive editing"};
  app.require_subcommand(1);

  QuadricConfig cfg;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--boundary-weight", cfg.boundary_weight, "Weight of boundary-preserving planes")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--placement", cfg.placement, "Vertex placement policy")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, PlacementPolicy>{{"optimal", PlacementPolicy::optimal},
                                                   {"subset", PlacementPolicy::subset}},
            CLI::ignore_case));
  };

  std::string input;
  std::string output;

  auto* simplify = app.add_subcommand("simplify", "Build a hierarchy from an OBJ model");
  simplify->add_option("input", input, "Input OBJ")->required()->check(CLI::ExistingFile);
  simplify->add_option("--out", output, "Hierarchy file to write")->required();
  add_config(simplify);

  std::size_t vertices = 0, faces = 0, lod = 0;
  auto* extract = app.add_subcommand("extract", "Write one level of detail as OBJ");
  extract->add_option("hierarchy", input, "Hierarchy file")->required()->check(CLI::ExistingFile);
  auto* opt_v = extract->add_option("--vertices", vertices, "Cut with this many vertices");
  auto* opt_f = extract->add_option("--faces", faces, "Most detailed cut with at most this many faces");
  auto* opt_k = extract->add_option("--lod", lod, "LOD position (number of applied collapses)");
  opt_v->excludes(opt_f)->excludes(opt_k);
  opt_f->excludes(opt_k);
  extract->add_option("--out", output, "OBJ file to write")->required();

  std::string script_path;
  auto* apply = app.add_subcommand("apply", "Replay an edit script");
  apply->add_option("model", input, "Hierarchy file or OBJ model")->required()->check(CLI::ExistingFile);
  apply->add_option("--script", script_path, "Edit script")->required()->check(CLI::ExistingFile);
  apply->add_option("--out-dir", output, "Directory for the script's outputs")->required();
  add_config(apply);

  auto* validate_cmd = app.add_subcommand("validate", "Check a hierarchy file");
  validate_cmd->add_option("hierarchy", input, "Hierarchy file")->required()->check(CLI::ExistingFile);

  int port = 8765;
  bool use_stdio = false;
  auto* serve = app.add_subcommand("serve", "Run an editing session service");
  serve->add_option("model", input, "Hierarchy file or OBJ model to preload")->check(CLI::ExistingFile);
  serve->add_option("--port", port, "TCP port on 127.0.0.1 (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_flag("--stdio", use_stdio, "Speak the protocol on stdin/stdout instead of TCP");
  add_config(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (simplify->parsed()) {
      const Mesh mesh = read_obj_file(input);
      auto [h, order] = build_hierarchy(mesh, cfg);
      write_text_file(output, save_hierarchy(h, order));
      out << "hierarchy: " << h.size() << " nodes, " << order.size() << " collapses\n";
      return 0;
    }
    if (extract->parsed()) {
      if (!opt_v->count() && !opt_f->count() && !opt_k->count()) {
        err << "extract: one of --vertices, --faces or --lod is required\n";
        return 2;
      }
      auto [h, order] = load_hierarchy(read_text_file(input));
      LodPosition k = 0;
      if (opt_v->count())
        k = lod_for_vertices(h, order, vertices);
      else if (opt_f->count())
        k = lod_for_faces(h, order, faces);
      else
        k = lod;
      if (k > order.size()) {
        err << "extract: LOD position " << k << " beyond " << order.size() << " collapses\n";
        return 1;
      }
      const CutMesh cm = extract_mesh(h, cut_at(h, order, k));
      write_text_file(output, save_obj(cm.mesh));
      out << "lod " << k << ": " << cm.mesh.vertex_count() << " vertices, " << cm.mesh.face_count() << " faces\n";
      return 0;
    }
    if (apply->parsed()) {
      const Script script = parse_script(read_text_file(script_path));
      Document doc = open_model(input, script.config.value_or(cfg));
      std::vector<Output> outputs;
      try {
        outputs = replay_script(doc, script);
      } catch (const ScriptError& e) {
        err << "apply: " << e.what() << "\n";
        return 1;
      }
      std::map<std::string, std::string> files;
      for (auto& o : outputs) files[o.name] = std::move(o.contents);
      for (const auto& [name, contents] : files) {
        const fs::path target = fs::path(output) / name;
        fs::create_directories(target.parent_path());
        write_text_file(target, contents);
      }
      out << "applied " << script.commands.size() << " commands, wrote " << files.size() << " files\n";
      return 0;
    }
    if (validate_cmd->parsed()) {
      auto [h, order] = load_hierarchy(read_text_file(input));
      const ValidationReport report = validate(h, order);
      if (report.empty()) {
        out << "ok: " << h.size() << " nodes, " << order.size() << " collapses\n";
        return 0;
      }
      for (const auto& v : report) out << to_string(v.kind) << ": " << v.message << "\n";
      out << report.size() << " violation(s)\n";
      return 1;
    }
    if (serve->parsed()) {
      std::optional<Document> model;
      if (!input.empty()) model = open_model(input, cfg);
      if (use_stdio) {
        serve_streams(std::cin, out, std::move(model));
      } else {
        serve_tcp(port, model, [&](int bound) { err << "listening on 127.0.0.1:" << bound << std::endl; });
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace semisimp
