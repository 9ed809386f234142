#pragma once

#include <string>
#include <vector>

#include "might/model.hpp"

namespace might::io {

/// A dense numeric CSV with a header row of column names.
struct CsvTable {
    std::vector<std::string> header;
    Matrix values;
};

/// Throws FileError naming the path when the file is missing or malformed.
CsvTable read_csv(const std::string& path);

/// Values are written with 17 significant digits so a re-read is exact.
void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& header);

/// One CSV per dataset; column names come from the first file.
DatasetCollection load_collection(const std::vector<std::string>& paths);

/// Shortest-round-trip-safe decimal form (17 significant digits).
std::string format_double(double value);

}  // namespace might::io
