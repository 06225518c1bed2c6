#include "equal/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace equal {

namespace {

bool parse_field(const std::string& field, double* out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  *out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

}  // namespace

Matrix read_csv_matrix(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool skipped_header = !header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      double value = 0.0;
      if (!parse_field(field, &value)) {
        throw InvalidInput("'" + path + "' line " + std::to_string(lineno) +
                           ": non-numeric field '" + field + "'");
      }
      row.push_back(value);
    }
    if (line.back() == ',') {
      throw InvalidInput("'" + path + "' line " + std::to_string(lineno) +
                         ": trailing comma");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput("'" + path + "' line " + std::to_string(lineno) +
                         ": ragged row (" + std::to_string(row.size()) +
                         " fields, expected " +
                         std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) {
    throw InvalidInput("'" + path + "' contains no data");
  }

  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

void write_csv_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out.good()) throw InvalidInput("write to '" + path + "' failed");
}

}  // namespace equal
