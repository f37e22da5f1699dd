#pragma once

#include <iosfwd>
#include <string>

#include "ljf/config.hpp"

namespace ljf {

// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitWarning = 2;

// Runs config.task, writing result.json (and CSVs unless json_only) into config.out_dir.
// Errors are rendered to `err` as "error[E<code>] <name>: <message>".
int run(const RunConfig& config, std::ostream& err);

// "%.17g".
std::string format_double(double x);

void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace ljf
