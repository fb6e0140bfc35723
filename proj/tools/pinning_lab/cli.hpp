#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pinning::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_runtime = 2;

/// Runs one invocation. args[0] is the program name. The document goes to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// FNV-1a 64-bit digest used by --canonical-hash.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace pinning::cli
