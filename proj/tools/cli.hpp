#pragma once

#include <iosfwd>

namespace semisimp {

/// Command-line entry point; returns the process exit status.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace semisimp
