#pragma once

#include <stdexcept>
#include <string>

namespace dstsp {

enum class ErrorKind {
  InvalidPlan,
  EmptyInstance,
  SearchSpaceTooLarge,
  HypothesisViolated,
  ControlOutOfRange,
  NotSymmetric,
  EmptyPointSet,
  DegenerateFit,
  NonIntegerGamma,
  OutOfSupport,
  CellNotContained,
  TargetOutsideCover,
  TooLarge,
  NonpositiveZeta,
  GridMismatch,
  AlphaOutOfRange,
  OutOfGrid,
  ZeroMass,
  AllZeroFailures,
  ConfigError,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace dstsp
