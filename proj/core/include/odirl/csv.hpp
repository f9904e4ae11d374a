#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace odirl::csv {

// 17 significant digits: parse_double(format_double(x)) == x for every finite x.
std::string format_double(double x);
double parse_double(std::string_view field);

std::vector<std::string> split(std::string_view line, char sep = ',');

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(std::string_view name) const;  // -1 when absent
};

// Lines starting with `comment_prefix` before the header are skipped and
// returned through `preamble` when non-null.
Table read(std::istream& is, std::vector<std::string>* preamble = nullptr);
Table read_file(const std::string& path, std::vector<std::string>* preamble = nullptr);

}  // namespace odirl::csv
