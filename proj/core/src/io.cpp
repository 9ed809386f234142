#include "might/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "might/errors.hpp"

namespace might::io {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError(path, "cannot open file");

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw FileError(path, "empty file");
    for (auto f : split_fields(line)) table.header.emplace_back(trim(f));
    const std::size_t cols = table.header.size();

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != cols)
            throw FileError(path, "line " + std::to_string(line_no) + " has " +
                                      std::to_string(fields.size()) + " fields, expected " +
                                      std::to_string(cols));
        for (auto f : fields) {
            const auto t = trim(f);
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw FileError(path, "line " + std::to_string(line_no) + ": cannot parse '" +
                                          std::string(t) + "' as a number");
            values.push_back(v);
        }
        ++rows;
    }
    table.values.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            table.values(static_cast<Index>(r), static_cast<Index>(c)) = values[r * cols + c];
    return table;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(const std::string& path, const Matrix& values,
               const std::vector<std::string>& header) {
    if (header.size() != static_cast<std::size_t>(values.cols()))
        throw DimensionMismatch("header has " + std::to_string(header.size()) +
                                " names for " + std::to_string(values.cols()) + " columns");
    std::ofstream out(path);
    if (!out) throw FileError(path, "cannot open file for writing");
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (Index r = 0; r < values.rows(); ++r) {
        for (Index c = 0; c < values.cols(); ++c) out << (c ? "," : "") << format_double(values(r, c));
        out << '\n';
    }
    if (!out) throw FileError(path, "write failed");
}

DatasetCollection load_collection(const std::vector<std::string>& paths) {
    if (paths.empty()) throw InvalidArgument("no dataset files given");
    std::vector<Matrix> data;
    std::vector<std::string> names;
    for (const auto& path : paths) {
        CsvTable t = read_csv(path);
        if (names.empty()) names = t.header;
        data.push_back(std::move(t.values));
    }
    return DatasetCollection(std::move(data), std::move(names));
}

}  // namespace might::io
