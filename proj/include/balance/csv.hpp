#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/tokenizer.hpp>

#include "balance/errors.hpp"

namespace balance::csv {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Whole-file CSV with a named header. Quoted fields follow the usual escaped-list rules.
class Table {
 public:
  static Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Table t;
    t.path_ = path.string();
    std::string text;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, text)) {
      ++line_no;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (line_no == 1 && text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
      if (text.find_first_not_of(" \t") == std::string::npos) continue;
      auto fields = split(text);
      if (!have_header) {
        for (std::size_t i = 0; i < fields.size(); ++i) t.columns_.emplace(trim(fields[i]), i);
        t.width_ = fields.size();
        have_header = true;
        continue;
      }
      t.rows_.push_back({line_no, std::move(fields)});
    }
    if (!have_header) throw SchemaError(path.string() + ": missing header row");
    return t;
  }

  const std::string& path() const { return path_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t width() const { return width_; }

  std::optional<std::size_t> find(const std::string& column) const {
    auto it = columns_.find(column);
    if (it == columns_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require(const std::string& column) const {
    if (auto c = find(column)) return *c;
    throw SchemaError(path_ + ": missing column '" + column + "'");
  }

  static std::vector<std::string> split(const std::string& line) {
    using Sep = boost::escaped_list_separator<char>;
    boost::tokenizer<Sep> tok(line, Sep('\\', ',', '"'));
    return {tok.begin(), tok.end()};
  }

  static std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
  }

 private:
  std::string path_;
  std::unordered_map<std::string, std::size_t> columns_;
  std::size_t width_ = 0;
  std::vector<Row> rows_;
};

/// Per-row failure; caught by parsers and recorded with the line number.
struct RowFailure : Error {
  using Error::Error;
};

inline const std::string& field(const Row& row, std::size_t column, const char* name) {
  if (column >= row.fields.size()) throw RowFailure(std::string("missing value for '") + name + "'");
  return row.fields[column];
}

inline std::optional<long> optional_int(const Row& row, std::size_t column, const char* name) {
  const std::string value = Table::trim(field(row, column, name));
  if (value.empty()) return std::nullopt;
  long out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    // Stata exports sometimes write integers as "1949.0".
    double d = 0;
    const auto [dptr, dec] = std::from_chars(value.data(), end, d);
    if (dec != std::errc{} || dptr != end || d != static_cast<double>(static_cast<long>(d)))
      throw RowFailure(std::string("'") + name + "' is not an integer: '" + value + "'");
    out = static_cast<long>(d);
  }
  return out;
}

inline long required_int(const Row& row, std::size_t column, const char* name) {
  if (auto v = optional_int(row, column, name)) return *v;
  throw RowFailure(std::string("missing value for '") + name + "'");
}

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\\") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace balance::csv
