#pragma once

#include <ostream>

namespace qcf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

// Entry point of the qcfreeze tool. Summaries go to `out`, diagnostics to
// `err`; CSV goes to --out when given, otherwise to `out` after the summary.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcf::cli
