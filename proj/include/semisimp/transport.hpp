#pragma once

#include "semisimp/session.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace semisimp {

/// A bidirectional line stream. `read_line` returns false at end of input.
struct LineChannel {
  std::function<bool(std::string&)> read_line;
  std::function<void(const std::string&)> write_line;
};

/// Runs one session over a channel until its input ends. Requests are
/// handled in arrival order on a worker thread; `cancel` requests are
/// answered by the reader immediately so they can interrupt a resimplify.
void serve_channel(LineChannel channel, std::optional<Document> model);

/// serve_channel over a pair of iostreams.
void serve_streams(std::istream& in, std::ostream& out, std::optional<Document> model);

/// Accepts connections on 127.0.0.1:port one at a time, each with a fresh
/// session over a copy of `model`. Port 0 picks a free port; `on_listen`
/// receives the bound port. Returns after `max_connections` sessions (0 = forever).
void serve_tcp(int port, const std::optional<Document>& model, const std::function<void(int)>& on_listen = {},
               std::size_t max_connections = 0);

}  // namespace semisimp
