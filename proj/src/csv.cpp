#include "webgeo/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "webgeo/errors.hpp"

namespace webgeo::csv {

namespace {

std::string canonical_name(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string quote(std::string_view field, char delim) {
  if (field.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string_view::npos &&
      !(field.size() > 0 && field.front() == '"')) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delim) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << delim;
    out << quote(fields[i], delim);
  }
  out << '\n';
}

Reader::Reader(std::istream& in, char delim) : in_(in), delim_(delim) {
  std::string line;
  while (read_line(in_, line)) {
    ++line_;
    if (line.empty() || line.front() == '#') continue;
    header_ = split(line, delim_);
    break;
  }
}

std::optional<std::size_t> Reader::column(std::initializer_list<std::string_view> aliases) const {
  for (auto alias : aliases) {
    const std::string want = canonical_name(alias);
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (canonical_name(header_[i]) == want) return i;
    }
  }
  return std::nullopt;
}

std::size_t Reader::require(std::initializer_list<std::string_view> aliases,
                            std::string_view what) const {
  if (auto idx = column(aliases)) return *idx;
  throw SchemaError("missing mandatory column " + std::string(what));
}

bool Reader::next(std::vector<std::string>& row) {
  std::string line;
  while (read_line(in_, line)) {
    ++line_;
    if (line.empty() || line.front() == '#') continue;
    row = split(line, delim_);
    return true;
  }
  return false;
}

}  // namespace webgeo::csv
