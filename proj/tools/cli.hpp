#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace urn::cli {

inline constexpr const char* kArtifactVersion = "urnlab 1.0.0";

enum ExitCode : int {
    kOk = 0,
    kCapacity = 2,
    kInvariant = 3,
    kUsage = 64,
    kContradiction = 65,
};

/// Runs one command line (without the program name). Results go to `out` unless
/// --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace urn::cli
