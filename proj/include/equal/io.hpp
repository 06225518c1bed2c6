#pragma once

#include <string>

#include "equal/matrix_core.hpp"

namespace equal {

// Strict comma-separated numeric matrix reader. Every row must have the
// same number of fields; blank trailing lines are ignored. `header` skips
// the first line.
Matrix read_csv_matrix(const std::string& path, bool header = false);

// Writes with 17 significant digits so a round trip is exact.
void write_csv_matrix(const std::string& path, const Matrix& m);

}  // namespace equal
