#pragma once

#include "semisimp/mesh.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace semisimp {

/// Parses Wavefront OBJ text (v, vt, vn, f). Polygons are fan-triangulated;
/// a vertex whose corners disagree on texcoord/normal is duplicated so that
/// attributes stay per-vertex. Throws ParseError with the offending line.
Mesh load_obj(std::string_view text);

/// Emits v lines (17 significant digits), vt/vn when every vertex carries the
/// attribute, and f lines. Vertex order is preserved.
std::string save_obj(const Mesh& mesh);

Mesh read_obj_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace semisimp
