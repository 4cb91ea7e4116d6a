#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace sspanel::cli {

/// Executes one command-line invocation of the tool.
///
/// `args` holds the arguments after the program name, in command-line
/// order. Primary output goes to `out` unless --out redirects it to a
/// file, in which case a sibling "<out>.manifest" records the version,
/// the command, and every effective setting (excluding the thread cap and
/// output paths) so the artifact can be reproduced exactly. Diagnostics
/// go to `err`. A non-null `stop` lets long studies be interrupted; the
/// partial summary is then flagged truncated.
///
/// Returns the process exit code: 0 success, 2 configuration or usage
/// error, 3 degenerate data, 4 capacity exceeded, 1 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err, const std::atomic<bool>* stop = nullptr);

/// argv-style convenience overload; argv[0] is ignored as the program
/// name.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err, const std::atomic<bool>* stop = nullptr);

}  // namespace sspanel::cli
