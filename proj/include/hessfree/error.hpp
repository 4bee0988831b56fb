#pragma once

#include <stdexcept>
#include <string>

namespace hessfree {

enum class ErrorCode {
  InvalidArgument = 1,
  DimensionMismatch,
  NonFinite,
  UnknownOracle,
  BadParams,
  NoInformativeProbe,
  DegenerateDomain,
  Config,
};

/// Exception type thrown by every hessfree routine. The code survives the
/// trip through the C API as an hf_status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hessfree
