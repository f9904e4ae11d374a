#include "odirl/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>

#include "odirl/types.hpp"

namespace odirl::csv {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(std::string_view field) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error("malformed number '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

int Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

Table read(std::istream& is, std::vector<std::string>* preamble) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.empty()) continue;
      if (line.front() == '#' || line.front() == '{') {
        if (preamble) preamble->push_back(line);
        continue;
      }
      t.header = split(line);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    t.rows.push_back(split(line));
  }
  if (!have_header) throw Error("csv: missing header line");
  return t;
}

Table read_file(const std::string& path, std::vector<std::string>* preamble) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read(is, preamble);
}

}  // namespace odirl::csv
