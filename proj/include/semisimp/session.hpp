#pragma once

#include "semisimp/document.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <string_view>

namespace semisimp {

inline constexpr std::string_view kSessionVersion = "semisimp-session/1";

/// One editing session speaking line-delimited JSON messages.
///
/// Requests are {id, kind, payload}; each gets one response {id, result} or
/// {id, error: {code, message}}. Events carry id 0: `cut_changed` after every
/// command that changes the viewed cut and `progress` during resimplify.
/// The first request must be `hello`.
class Session {
 public:
  using Emit = std::function<void(const Json&)>;

  explicit Session(Emit emit);

  /// Handles one request; everything it produces goes through `emit`.
  void handle(const Json& message);
  /// Parses one line and handles it; malformed JSON gets an error with a null id.
  void handle_line(std::string_view line);

  /// Asks a running (or a queued, when `request` is given) resimplify to stop.
  /// Safe to call from another thread.
  void request_cancel(std::optional<long long> request = std::nullopt);

  /// Installs a model without a request, as if load_model had succeeded.
  void preload(Document doc);

  bool has_model() const { return doc_.has_value(); }
  const Document& document() const { return *doc_; }
  const Script& recorded_script() const { return script_; }

 private:
  Json dispatch(long long id, const std::string& kind, const Json& payload);
  Json cut_json() const;
  Json run_command(const Json& command, long long request);
  std::vector<NodeId> selection_or(const Json& payload) const;
  Document& doc();

  Emit emit_;
  bool greeted_ = false;
  std::optional<Document> doc_;
  std::vector<NodeId> selection_;
  Script script_;

  std::atomic<bool> cancel_current_{false};
  std::mutex cancel_mutex_;
  std::set<long long> cancelled_requests_;
};

}  // namespace semisimp
