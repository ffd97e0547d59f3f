#pragma once

// Command-line front end. execute() is the whole program minus process
// plumbing so tests can drive it in-process.
//
// Exit codes: 0 success, 1 I/O or parse failure, 2 domain error (code in the
// diagnostics list), 64 usage error.

#include <iosfwd>
#include <string>
#include <vector>

namespace anop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitUsage = 64;

/// args excludes the program name.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace anop::cli
