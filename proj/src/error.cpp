#include "ljf/error.hpp"

namespace ljf {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::argument: return "argument";
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::convexity: return "convexity";
    case ErrorCode::empty_set: return "empty-set";
    case ErrorCode::center_outside: return "center-outside";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::convergence: return "convergence";
    case ErrorCode::bracket: return "bracket";
    case ErrorCode::domain: return "domain";
    case ErrorCode::invariant: return "invariant";
    case ErrorCode::region: return "region";
    case ErrorCode::parse: return "parse";
    case ErrorCode::validation: return "validation";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ljf
