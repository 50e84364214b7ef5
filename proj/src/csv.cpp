#include "resamp/csv.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "resamp/errors.hpp"

namespace resamp {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

bool parse_double(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

}  // namespace

CsvTable CsvTable::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return read_stream(in, path);
}

CsvTable CsvTable::read_stream(std::istream& in, const std::string& name) {
  CsvTable table;
  table.name_ = name;
  std::string line;
  if (!std::getline(in, line))
    throw InvalidInput(name + ": empty file (a header row is required)");
  table.header_ = split_csv_line(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != table.header_.size())
      throw InvalidInput(name + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(table.header_.size()) + " fields, got " +
                         std::to_string(fields.size()));
    table.rows_.push_back(std::move(fields));
  }
  return table;
}

const std::string& CsvTable::cell(std::size_t row, std::size_t col) const {
  return rows_.at(row).at(col);
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header_)
    if (h == name) return true;
  return false;
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  std::string known;
  for (const auto& h : header_) {
    if (!known.empty()) known += ", ";
    known += h;
  }
  throw InvalidInput(name_ + ": no column named '" + name + "' (columns: " + known + ")");
}

Vector CsvTable::numeric_column(const std::string& name) const {
  const std::size_t col = column_index(name);
  Vector out(static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double v;
    if (!parse_double(rows_[i][col], &v))
      throw InvalidInput(name_ + ":" + std::to_string(i + 2) + ": column '" + name +
                         "' value '" + rows_[i][col] + "' is not numeric");
    out[static_cast<Eigen::Index>(i)] = v;
  }
  if (out.size() == 0)
    throw InvalidInput(name_ + ": column '" + name + "' is empty");
  return out;
}

Vector CsvTable::numeric_column_where(const std::string& value_column,
                                      const std::string& factor_column,
                                      const std::string& level) const {
  const std::size_t vcol = column_index(value_column);
  const std::size_t fcol = column_index(factor_column);
  std::vector<double> vals;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i][fcol] != level) continue;
    double v;
    if (!parse_double(rows_[i][vcol], &v))
      throw InvalidInput(name_ + ":" + std::to_string(i + 2) + ": column '" + value_column +
                         "' value '" + rows_[i][vcol] + "' is not numeric");
    vals.push_back(v);
  }
  if (vals.empty())
    throw InvalidInput(name_ + ": no rows with " + factor_column + " = '" + level + "'");
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::vector<std::string> CsvTable::levels(const std::string& column) const {
  const std::size_t col = column_index(column);
  std::vector<std::string> out;
  for (const auto& row : rows_) {
    const std::string& v = row[col];
    bool seen = false;
    for (const auto& existing : out)
      if (existing == v) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(v);
  }
  return out;
}

bool CsvTable::column_is_numeric(std::size_t col) const {
  if (rows_.empty()) return false;
  for (const auto& row : rows_) {
    double v;
    if (!parse_double(row[col], &v)) return false;
  }
  return true;
}

}  // namespace resamp
