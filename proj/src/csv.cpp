#include "fcmsc/csv.hpp"

#include "fcmsc/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

namespace fcmsc::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

template <class Fn>
void for_each_record(const std::filesystem::path& path, bool skip_header, Fn&& fn) {
    std::ifstream in = open(path);
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
            line.erase(0, 3);
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        if (trim(line).empty()) continue;
        fn(lineno, split(line));
    }
}

} // namespace

Matrix read_matrix(const std::filesystem::path& path, bool skip_header) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    for_each_record(path, skip_header, [&](std::size_t lineno, const auto& cells) {
        if (rows == 0) {
            cols = cells.size();
        } else if (cells.size() != cols) {
            throw ParseError(path.string(), lineno, cells.size(),
                             "expected " + std::to_string(cols) + " columns");
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v = 0.0;
            const auto cell = cells[c];
            const auto [ptr, ec] =
                std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
                throw ParseError(path.string(), lineno, c + 1,
                                 "not a number: '" + std::string(cell) + "'");
            values.push_back(v);
        }
        ++rows;
    });
    if (rows == 0) throw InvalidInput(path.string() + ": empty file");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                values[r * cols + c];
    return m;
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    char buf[32];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<long long> read_integers(const std::filesystem::path& path,
                                     bool skip_header) {
    std::vector<long long> out;
    for_each_record(path, skip_header, [&](std::size_t lineno, const auto& cells) {
        if (cells.size() != 1)
            throw ParseError(path.string(), lineno, cells.size(),
                             "expected a single column");
        long long v = 0;
        const auto cell = cells[0];
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
            throw ParseError(path.string(), lineno, 1,
                             "not an integer: '" + std::string(cell) + "'");
        out.push_back(v);
    });
    if (out.empty()) throw InvalidInput(path.string() + ": empty file");
    return out;
}

} // namespace fcmsc::csv
