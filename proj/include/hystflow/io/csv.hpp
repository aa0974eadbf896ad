#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/series.hpp"

namespace hystflow::io {

/// 17 significant digits in scientific notation; round-trips every finite
/// double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string to_csv(const Series& s) {
    std::string out;
    for (std::size_t k = 0; k < s.names.size(); ++k) {
        if (k) out += ',';
        out += s.names[k];
    }
    out += '\n';
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t k = 0; k < s.columns.size(); ++k) {
            if (k) out += ',';
            out += format_double(s.columns[k][i]);
        }
        out += '\n';
    }
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

/// Header row then one row per sample, independent column first.
inline void write_series(const Series& s, const std::filesystem::path& path) {
    if (s.empty() || s.names.empty()) throw IoError("refusing to write empty series to " + path.string());
    for (const auto& c : s.columns)
        if (c.size() != s.rows()) throw IoError("ragged series for " + path.string());
    write_text(path, to_csv(s));
}

/// As write_series, for series indexed by time: the first column must be t.
inline void write_timeseries(const Series& s, const std::filesystem::path& path) {
    if (!s.names.empty() && s.names.front() != "t")
        throw IoError("time series for " + path.string() + " must start with column t, got " + s.names.front());
    write_series(s, path);
}

inline Series parse_csv(const std::string& text, const std::string& origin = "<csv>") {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw IoError(origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> names;
    for (auto n : split_commas(line)) names.emplace_back(n);
    Series s(names);
    std::size_t lineno = 1;
    std::vector<double> row(names.size());
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_commas(line);
        if (cells.size() != names.size())
            throw IoError(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(names.size())
                          + " fields, got " + std::to_string(cells.size()));
        for (std::size_t k = 0; k < cells.size(); ++k) {
            try {
                row[k] = parse_double(cells[k]);
            } catch (const std::invalid_argument& e) {
                throw IoError(origin + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
        s.push(row);
    }
    return s;
}

inline Series read_timeseries(const std::filesystem::path& path) { return parse_csv(read_text(path), path.string()); }

}  // namespace hystflow::io
