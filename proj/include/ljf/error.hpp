#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace ljf {

// Stable codes; the CLI prints them as "E<code>".
enum class ErrorCode : int {
  argument = 10,
  dimension = 11,
  convexity = 12,
  empty_set = 13,
  center_outside = 14,
  degenerate = 15,
  convergence = 16,
  bracket = 17,
  domain = 18,
  invariant = 19,
  region = 20,
  parse = 30,
  validation = 31,
  io = 32,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the max-det solver when the barrier path does not converge.
class MvieConvergenceError : public Error {
 public:
  MvieConvergenceError(const std::string& what, Eigen::MatrixXd last_T)
      : Error(ErrorCode::convergence, what), last_T_(std::move(last_T)) {}
  const Eigen::MatrixXd& last_iterate() const noexcept { return last_T_; }

 private:
  Eigen::MatrixXd last_T_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace ljf
