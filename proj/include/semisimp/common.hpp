#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace semisimp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

using VertexId = std::uint32_t;
using NodeId = std::uint32_t;

/// Three vertex (or node) indices, counterclockwise.
using Face = std::array<std::uint32_t, 3>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A long-running operation stopped at the caller's request.
class Cancelled : public Error {
 public:
  Cancelled() : Error("operation cancelled") {}
};

/// Malformed input text; carries the 1-based line when one applies.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t{a} << 32) | b;
}

inline std::pair<std::uint32_t, std::uint32_t> edge_from_key(std::uint64_t key) {
  return {static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xffffffffu)};
}

}  // namespace semisimp
