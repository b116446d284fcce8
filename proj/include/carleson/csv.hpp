#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace carleson::csv {

/// 17 significant digits; round-trips every double.
std::string number(double v);

/// RFC-4180 field quoting.
std::string field(std::string_view s);

/// Accumulates an RFC-4180 table (CRLF line ends, mandatory header).
class Writer {
public:
  explicit Writer(std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return text_; }

private:
  std::size_t columns_;
  std::string text_;
};

} // namespace carleson::csv
