#include "tcs/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace tcs {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    std::string out = s.substr(a, b - a);
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        if (c == delim && !quoted) {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null" || cell == "NULL";
}

// Fills NaN gaps in place; returns how many cells were filled.
std::size_t impute_column(Eigen::Ref<Vector> col, const std::string& name) {
    const Eigen::Index n = col.size();
    std::vector<Eigen::Index> known;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!std::isnan(col[i])) known.push_back(i);
    if (known.empty()) throw DataError("column '" + name + "' has no values");
    std::size_t filled = 0;
    for (Eigen::Index i = 0; i < known.front(); ++i, ++filled) col[i] = col[known.front()];
    for (Eigen::Index i = known.back() + 1; i < n; ++i, ++filled) col[i] = col[known.back()];
    for (std::size_t k = 0; k + 1 < known.size(); ++k) {
        const Eigen::Index a = known[k];
        const Eigen::Index b = known[k + 1];
        for (Eigen::Index i = a + 1; i < b; ++i, ++filled) {
            const double w = static_cast<double>(i - a) / static_cast<double>(b - a);
            col[i] = (1.0 - w) * col[a] + w * col[b];
        }
    }
    return filled;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << text;
    if (!out) throw DataError("write to '" + path + "' failed");
}

Dataset parse_csv(const std::string& text, const CsvOptions& opts, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        rows.push_back(split(line, opts.delimiter));
        line_numbers.push_back(line_no);
    }
    if (rows.empty()) throw DataError(source + ": empty file");

    Dataset ds;
    ds.source = source;
    std::size_t first = 0;
    if (opts.header) {
        ds.columns = rows.front();
        first = 1;
    } else {
        for (std::size_t j = 0; j < rows.front().size(); ++j) ds.columns.push_back("V" + std::to_string(j));
    }
    const std::size_t d = ds.columns.size();
    const std::size_t n = rows.size() - first;
    if (n == 0) throw DataError(source + ": no data rows");

    ds.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < n; ++r) {
        const auto& cells = rows[first + r];
        const std::size_t ln = line_numbers[first + r];
        if (cells.size() != d)
            throw DataError(source + ": line " + std::to_string(ln) + " has " + std::to_string(cells.size()) +
                            " fields, expected " + std::to_string(d));
        for (std::size_t j = 0; j < d; ++j) {
            double v = std::numeric_limits<double>::quiet_NaN();
            if (!is_missing(cells[j])) {
                char* end = nullptr;
                v = std::strtod(cells[j].c_str(), &end);
                if (end == cells[j].c_str() || *end != '\0' || std::isnan(v) || std::isinf(v))
                    throw DataError(source + ": non-numeric value '" + cells[j] + "' at line " + std::to_string(ln) +
                                    ", column " + std::to_string(j + 1) + " ('" + ds.columns[j] + "')");
            }
            ds.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v;
        }
    }
    for (std::size_t j = 0; j < d; ++j)
        ds.imputed += impute_column(ds.values.col(static_cast<Eigen::Index>(j)), ds.columns[j]);
    return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& opts) {
    return parse_csv(read_text_file(path), opts, path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_csv(const std::vector<std::string>& columns, const Matrix& values) {
    require(columns.size() == static_cast<std::size_t>(values.cols()), "format_csv: column names mismatch");
    std::string out;
    for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + columns[j];
    out += '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (j) out += ',';
            out += format_double(values(r, j));
        }
        out += '\n';
    }
    return out;
}

void save_csv(const std::string& path, const std::vector<std::string>& columns, const Matrix& values) {
    write_text_file(path, format_csv(columns, values));
}

}  // namespace tcs
