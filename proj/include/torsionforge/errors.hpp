#pragma once

#include <stdexcept>
#include <string>

namespace tf {

// Failure categories. Input errors map to CLI exit code 2, everything else
// (a violated mathematical invariant) to exit code 1.
enum class Err {
  InputError,
  DifferentialSquareNonzero,
  MetricNotPositiveDefinite,
  NotACocycle,
  DependentColumns,
  ActionInvalid,
  ActionNotRegular,
  InvalidLocalSystem,
  HypothesisFailed,
  SubgroupNotSigmaStable,
  EnumerationBoundExceeded,
  MismatchBetweenFormulas,
  GroupNotAbelian,
  AssertionFailed,
};

const char* err_name(Err e);
bool is_input_error(Err e);

class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& msg);
  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] void fail(Err code, const std::string& msg);

}  // namespace tf
