#pragma once
//
// Deterministic text output: 17-significant-digit decimals, comma-separated
// matrices with a header row, and atomic file replacement.
//

#include "swdae/types.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace swdae {

// %.17g
std::string format_double(double x);

// Header `<prefix>1,<prefix>2,...` followed by one line per row.
void write_matrix_csv(std::ostream& os, const Matrix& m, const std::string& column_prefix = "c");

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

// Writes to a sibling temporary file, then renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace swdae
