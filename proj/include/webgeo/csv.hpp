#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace webgeo::csv {

// Splits one line of a delimited table. Double-quoted fields may contain the
// delimiter and doubled quotes; fields never span lines.
std::vector<std::string> split(std::string_view line, char delim);

// Quotes a field only when it contains the delimiter, a quote or a newline.
std::string quote(std::string_view field, char delim);

// Shortest round-trip decimal form; identical doubles print identically.
std::string number(double value);

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delim);

// Header-addressed reader. Header names match case-insensitively, ignoring
// punctuation and whitespace ("first_party_domain" == "FirstPartyDomain").
// Lines starting with '#' are skipped.
class Reader {
 public:
  Reader(std::istream& in, char delim);

  // False on an empty stream (no header).
  bool has_header() const { return !header_.empty(); }
  const std::vector<std::string>& header() const { return header_; }

  // Index of the first column whose name matches any of the aliases.
  std::optional<std::size_t> column(std::initializer_list<std::string_view> aliases) const;
  std::size_t require(std::initializer_list<std::string_view> aliases, std::string_view what) const;

  // Next data row; false at end of stream. Blank lines are skipped.
  bool next(std::vector<std::string>& row);
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  char delim_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
};

}  // namespace webgeo::csv
