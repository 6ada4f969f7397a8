#pragma once

#include "tcs/error.hpp"
#include "tcs/stats.hpp"

#include <string>
#include <vector>

namespace tcs {

struct Dataset {
    std::vector<std::string> columns;
    Matrix values;  // rows are timesteps
    std::string source;
    std::size_t imputed = 0;
};

struct CsvOptions {
    bool header = true;
    char delimiter = ',';
};

/// Empty cells and NA/NaN/null markers count as missing. Interior gaps are
/// filled by linear interpolation between the nearest finite neighbours,
/// leading and trailing gaps by the nearest value.
Dataset load_csv(const std::string& path, const CsvOptions& opts = {});
Dataset parse_csv(const std::string& text, const CsvOptions& opts = {}, const std::string& source = "<memory>");

/// Writes the header plus every value with 17 significant digits.
void save_csv(const std::string& path, const std::vector<std::string>& columns, const Matrix& values);
std::string format_csv(const std::vector<std::string>& columns, const Matrix& values);

/// %.17g, which round-trips every double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tcs
