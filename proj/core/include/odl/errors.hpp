#pragma once

#include <stdexcept>
#include <string>

namespace odl {

enum class ErrorCode {
  domain,
  degenerate_gradient,
  no_convergence,
  unsupported,
  precondition,
  masked_stencil,
  trapped_trace,
  degenerate_point,
  accuracy,
  parse,
  io,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// the runner can map it into an error manifest.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace odl
