#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "decafs/error.hpp"

namespace decafs::io {

/// The input file could not be opened or read.
class UnreadableInput : public Error {
 public:
  using Error::Error;
};

/// A row could not be turned into a finite number.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  /// 1-based line number in the input.
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Strict locale-independent parse of a finite decimal number; surrounding
/// blanks and double quotes are ignored. Returns false on anything else.
bool parse_number(std::string_view text, double& out);

/// Reads one column of a text or delimited file (comma, tab, semicolon or
/// blanks, detected from the first non-empty line). `column` is empty for
/// the first column, a 1-based index, or a header name. A first row whose
/// selected cell is not numeric is treated as a header. Blank lines are
/// skipped.
///
/// Throws UnreadableInput, ParseError (bad cell, missing column, no data) and
/// InvalidParameter (bad column selector).
std::vector<double> read_series(const std::string& path, std::string_view column = {});
std::vector<double> parse_series(std::string_view text, std::string_view column = {});

}  // namespace decafs::io
