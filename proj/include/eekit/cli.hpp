#pragma once

#include <string>
#include <vector>

namespace eekit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;            // usage or config errors, stale plan
inline constexpr int kExitEvaluationFailed = 2;  // model runs failed, analysis aborted
inline constexpr int kExitIncompleteLedger = 3;  // ledger missing plan points

// Full command line interface (plan / run / analyze / report). The vector
// form takes arguments without the program name; both are safe to call
// repeatedly in-process.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args);

}  // namespace eekit
