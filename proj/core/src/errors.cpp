#include "odl/errors.hpp"

namespace odl {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::degenerate_gradient: return "degenerate_gradient";
    case ErrorCode::no_convergence: return "no_convergence";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::masked_stencil: return "masked_stencil";
    case ErrorCode::trapped_trace: return "trapped_trace";
    case ErrorCode::degenerate_point: return "degenerate_point";
    case ErrorCode::accuracy: return "accuracy";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace odl
