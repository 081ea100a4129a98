#include "decafs/series_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace decafs::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = trim(s.substr(1, s.size() - 2));
  return s;
}

// '\0' stands for runs of blanks.
char detect_delimiter(std::string_view line) {
  for (char d : {',', '\t', ';'}) {
    if (line.find(d) != std::string_view::npos) return d;
  }
  return '\0';
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  if (delim == '\0') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\r') ++i;
      cells.push_back(line.substr(start, i - start));
    }
    return cells;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    cells.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::optional<std::size_t> column_index(std::string_view column) {
  if (column.empty()) return 0;
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), idx);
  if (ec != std::errc() || ptr != column.data() + column.size()) return std::nullopt;
  if (idx == 0) throw InvalidParameter("column indices are 1-based");
  return idx - 1;
}

}  // namespace

bool parse_number(std::string_view text, double& out) {
  text = unquote(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) return false;
  out = v;
  return true;
}

std::vector<double> parse_series(std::string_view text, std::string_view column) {
  std::optional<std::size_t> index = column_index(column);
  std::vector<double> out;
  char delim = '\0';
  bool first = true;
  std::size_t row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++row;
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (first) delim = detect_delimiter(line);
    const std::vector<std::string_view> cells = split(line, delim);

    if (first) {
      first = false;
      if (!index) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (unquote(cells[i]) == trim(column)) index = i;
        }
        if (!index) {
          throw InvalidParameter("no column named '" + std::string(column) + "' in the header");
        }
        continue;
      }
      double v = 0.0;
      if (*index < cells.size() && !parse_number(cells[*index], v)) continue;  // header
    }

    if (*index >= cells.size()) {
      throw ParseError(row, "missing column " + std::to_string(*index + 1));
    }
    double v = 0.0;
    if (!parse_number(cells[*index], v)) {
      throw ParseError(row, "cannot parse '" + std::string(trim(cells[*index])) +
                                "' as a finite number");
    }
    out.push_back(v);
    if (end == text.size()) break;
  }
  if (out.empty()) throw ParseError(row, "no observations found");
  return out;
}

std::vector<double> read_series(const std::string& path, std::string_view column) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) throw UnreadableInput("'" + path + "' is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableInput("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw UnreadableInput("error while reading '" + path + "'");
  return parse_series(buffer.str(), column);
}

}  // namespace decafs::io
