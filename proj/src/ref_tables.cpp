#include "psl/ref_tables.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "psl/embedded_tables.hpp"

namespace psl::ref {

namespace {

std::vector<Point> parse_table(const char* csv) {
  std::vector<Point> points;
  const std::string text(csv);
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != "n,k,p,mean_time_s")
        throw std::logic_error("embedded table: bad header '" + line + "'");
      header = false;
      continue;
    }
    double fields[4];
    const char* cur = line.c_str();
    for (int f = 0; f < 4; ++f) {
      char* end = nullptr;
      fields[f] = std::strtod(cur, &end);
      if (end == cur)
        throw std::logic_error("embedded table: bad row '" + line + "'");
      cur = *end == ',' ? end + 1 : end;
    }
    points.push_back({{fields[0], fields[1], fields[2]}, fields[3]});
  }
  return points;
}

}  // namespace

std::span<const Point> table1() {
  static const std::vector<Point> t = parse_table(detail::kTable1Csv);
  return t;
}

std::span<const Point> table2() {
  static const std::vector<Point> t = parse_table(detail::kTable2Csv);
  return t;
}

std::span<const Point> table3() {
  static const std::vector<Point> t = parse_table(detail::kTable3Csv);
  return t;
}

std::span<const Point> table4() {
  static const std::vector<Point> t = parse_table(detail::kTable4Csv);
  return t;
}

}  // namespace psl::ref
