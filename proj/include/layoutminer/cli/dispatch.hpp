#pragma once

#include <iosfwd>

namespace layoutminer {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Runs one command line: 0 on success, 1 on a domain error, 2 on a usage
// error (help goes to `err`).
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace layoutminer
