#include "carleson/csv.hpp"

#include "carleson/error.hpp"

#include <cmath>
#include <cstdio>

namespace carleson::csv {

std::string number(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void Writer::row(const std::vector<std::string>& fields) {
  require(fields.size() == columns_, "CSV row width does not match the header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      text_ += ',';
    text_ += field(fields[i]);
  }
  text_ += "\r\n";
}

} // namespace carleson::csv
