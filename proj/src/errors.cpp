#include "torsionforge/errors.hpp"

namespace tf {

const char* err_name(Err e) {
  switch (e) {
    case Err::InputError: return "InputError";
    case Err::DifferentialSquareNonzero: return "DifferentialSquareNonzero";
    case Err::MetricNotPositiveDefinite: return "MetricNotPositiveDefinite";
    case Err::NotACocycle: return "NotACocycle";
    case Err::DependentColumns: return "DependentColumns";
    case Err::ActionInvalid: return "ActionInvalid";
    case Err::ActionNotRegular: return "ActionNotRegular";
    case Err::InvalidLocalSystem: return "InvalidLocalSystem";
    case Err::HypothesisFailed: return "HypothesisFailed";
    case Err::SubgroupNotSigmaStable: return "SubgroupNotSigmaStable";
    case Err::EnumerationBoundExceeded: return "EnumerationBoundExceeded";
    case Err::MismatchBetweenFormulas: return "MismatchBetweenFormulas";
    case Err::GroupNotAbelian: return "GroupNotAbelian";
    case Err::AssertionFailed: return "AssertionFailed";
  }
  return "UnknownError";
}

bool is_input_error(Err e) {
  switch (e) {
    case Err::InputError:
    case Err::DifferentialSquareNonzero:
    case Err::MetricNotPositiveDefinite:
    case Err::NotACocycle:
    case Err::DependentColumns:
    case Err::ActionInvalid:
    case Err::ActionNotRegular:
    case Err::InvalidLocalSystem:
    case Err::HypothesisFailed:
    case Err::SubgroupNotSigmaStable:
    case Err::EnumerationBoundExceeded:
    case Err::GroupNotAbelian:
      return true;
    default:
      return false;
  }
}

Error::Error(Err code, const std::string& msg)
    : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}

void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace tf
