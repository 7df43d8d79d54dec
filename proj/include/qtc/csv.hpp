#pragma once

#include "qtc/wigner.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qtc {

/// Shortest representation that round-trips, independent of locale.
std::string format_double(double v);

/// "name [unit]"
std::string column(std::string_view name, std::string_view unit);

/// Comma-separated writer with a header row. Throws IoError on failure.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::string line_;
};

/// Matrix layout: the header row holds the p grid (first cell is the axis
/// label), each following row starts with x and then W(x, p_l).
void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& W, std::string_view x_unit,
                      std::string_view p_unit);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

} // namespace qtc
