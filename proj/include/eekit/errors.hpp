#pragma once

#include <stdexcept>

namespace eekit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };    // schema / field errors
struct GridError : Error { using Error::Error; };      // invalid grid definition
struct RangeError : Error { using Error::Error; };     // value outside interval
struct DesignError : Error { using Error::Error; };    // invalid design request
struct StatsError : Error { using Error::Error; };     // empty group, refused classification
struct IncompleteEvaluationError : Error { using Error::Error; };
struct TransformDomainError : Error { using Error::Error; };
struct LedgerError : Error { using Error::Error; };    // stale or malformed ledger
struct IoError : Error { using Error::Error; };
struct InternalError : Error { using Error::Error; };  // broken invariant

}  // namespace eekit
