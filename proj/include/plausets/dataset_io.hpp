#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plausets {

/// Strict numeric CSV: the first non-comment line must equal `header` exactly,
/// every later row must carry one finite number per column. Lines starting
/// with `#` and blank lines are skipped. Returns column-major data; malformed
/// rows raise ParseError with the 1-based line number.
std::vector<std::vector<double>> read_numeric_csv(std::istream& is,
                                                  const std::vector<std::string>& header);
std::vector<std::vector<double>> read_numeric_csv_file(const std::string& path,
                                                       const std::vector<std::string>& header);

/// Parses a finite double with no surrounding text (locale independent).
double parse_double(const std::string& s);

}  // namespace plausets
