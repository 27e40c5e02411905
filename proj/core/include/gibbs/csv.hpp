#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gibbs::csv {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

/// RFC 4180 field: quoted when it holds a comma, quote or line break.
std::string quote(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or -1.
  int column(std::string_view name) const;
};

/// Parses RFC 4180 text with a header line. Throws ConfigError on ragged
/// rows or an unterminated quote.
Table parse(std::string_view text);
Table read_file(const std::string& path);

}  // namespace gibbs::csv
