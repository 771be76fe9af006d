#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace subspace_ent {

/// Exit codes: 0 success (or Detected), 3 NotDetected, 2 usage error,
/// 1 runtime error or failed validation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotDetected = 3;

/// Version of every JSON document the tool writes.
inline constexpr int kSchemaVersion = 1;

/// Runs one command line (without the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subspace_ent
