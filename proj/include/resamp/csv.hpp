#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "resamp/statistics.hpp"

namespace resamp {

/// A parsed CSV file: header row plus string cells. Numeric conversion
/// happens on access so error messages can carry line numbers.
class CsvTable {
 public:
  static CsvTable read_file(const std::string& path);
  static CsvTable read_stream(std::istream& in, const std::string& name);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::string& cell(std::size_t row, std::size_t col) const;

  bool has_column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;  // throws InvalidInput

  /// Whole column as numbers; throws with the offending line number.
  Vector numeric_column(const std::string& name) const;

  /// Rows of `value_column` where `factor_column` equals `level`.
  Vector numeric_column_where(const std::string& value_column,
                              const std::string& factor_column,
                              const std::string& level) const;

  /// Distinct values of a column, in order of first appearance.
  std::vector<std::string> levels(const std::string& column) const;

  /// True when every non-empty cell of the column parses as a number.
  bool column_is_numeric(std::size_t col) const;

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace resamp
