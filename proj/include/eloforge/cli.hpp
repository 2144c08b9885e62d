#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eloforge {

/// Runs the command-line surface against the given streams and returns the
/// process exit code: 0 on success, 1 on usage errors, 2 when a certified
/// inequality is found violated.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// RFC-4180 field quoting (commas, quotes, newlines).
std::string csv_field(const std::string& s);

}  // namespace eloforge
