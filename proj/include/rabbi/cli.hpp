#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rabbi {

/// Command-line entry point. Exit codes: 0 success, 1 usage error (including
/// an unreadable config file), 2 runtime error or failed check.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rabbi
