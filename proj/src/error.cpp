#include "dstsp/error.hpp"

namespace dstsp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPlan: return "InvalidPlan";
    case ErrorKind::EmptyInstance: return "EmptyInstance";
    case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::ControlOutOfRange: return "ControlOutOfRange";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::EmptyPointSet: return "EmptyPointSet";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::NonIntegerGamma: return "NonIntegerGamma";
    case ErrorKind::OutOfSupport: return "OutOfSupport";
    case ErrorKind::CellNotContained: return "CellNotContained";
    case ErrorKind::TargetOutsideCover: return "TargetOutsideCover";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NonpositiveZeta: return "NonpositiveZeta";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::OutOfGrid: return "OutOfGrid";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::AllZeroFailures: return "AllZeroFailures";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace dstsp
