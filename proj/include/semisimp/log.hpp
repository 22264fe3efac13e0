#pragma once

#include <spdlog/spdlog.h>

namespace semisimp {

/// Process-wide logger writing to stderr. Level comes from SEMISIMP_LOG
/// (trace, debug, info, warn, error, off); default warn.
spdlog::logger& log();

}  // namespace semisimp
