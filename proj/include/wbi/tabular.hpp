#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wbi/errors.hpp"

namespace wbi {

/// Delimiter-separated text table. All pipeline artifacts use this format:
/// optional '#'-prefixed provenance lines, one header row, data rows.
struct TextTable {
  std::vector<std::string> comments;  // '#' lines, without the prefix
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  char delimiter = ',';
};

namespace detail {

inline std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, delim)) {
    // trim surrounding whitespace
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == delim) out.emplace_back("");
  return out;
}

inline char detect_delimiter(const std::string& header_line) {
  for (char c : header_line) {
    if (c == ',' || c == ';' || c == '\t') return c;
  }
  return ',';
}

}  // namespace detail

inline TextTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  TextTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
      continue;
    }
    if (!have_header) {
      t.delimiter = detail::detect_delimiter(line);
      t.header = detail::split_line(line, t.delimiter);
      have_header = true;
      continue;
    }
    t.rows.push_back(detail::split_line(line, t.delimiter));
  }
  if (!have_header) throw ValidationError("file has no header row: " + path);
  return t;
}

inline void write_table(const std::string& path, const TextTable& t) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  for (const auto& c : t.comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out << t.delimiter;
    out << t.header[i];
  }
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << t.delimiter;
      out << row[i];
    }
    out << "\n";
  }
  if (!out) throw ValidationError("write failed: " + path);
}

/// Shortest decimal representation that round-trips a double exactly.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

inline double parse_double(const std::string& s, const std::string& context) {
  if (s.empty())
    throw ValidationError("missing value (" + context + ")");
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw ValidationError("non-numeric cell '" + s + "' (" + context + ")");
  return v;
}

inline int parse_int(const std::string& s, const std::string& context) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("non-integer cell '" + s + "' (" + context + ")");
  return v;
}

}  // namespace wbi
