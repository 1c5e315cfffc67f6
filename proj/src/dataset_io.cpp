#include "plausets/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "plausets/errors.hpp"

namespace plausets {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

}  // namespace

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw DomainError("not a finite number: '" + s + "'");
  }
  return v;
}

std::vector<std::vector<double>> read_numeric_csv(std::istream& is,
                                                  const std::vector<std::string>& header) {
  std::vector<std::vector<double>> cols(header.size());
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split(t);
    if (!seen_header) {
      if (fields != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw ParseError("expected header '" + want + "'", lineno);
      }
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      try {
        cols[c].push_back(parse_double(fields[c]));
      } catch (const DomainError& e) {
        throw ParseError(std::string("column '") + header[c] + "': " + e.what(), lineno);
      }
    }
  }
  if (!seen_header) throw ParseError("empty input: missing header", lineno);
  return cols;
}

std::vector<std::vector<double>> read_numeric_csv_file(const std::string& path,
                                                       const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open data file '" + path + "'");
  return read_numeric_csv(in, header);
}

}  // namespace plausets
