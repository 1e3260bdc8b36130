#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmm::cli {

/// Runs one `mmm` invocation. `args` excludes the program name. Returns the
/// process exit code; errors are reported as a single "error: ..." line on
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmm::cli
