#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hystflow {

/// Named columns of equal length; the first column is the independent one.
struct Series {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    Series() = default;
    explicit Series(std::vector<std::string> column_names)
        : names(std::move(column_names)), columns(names.size()) {}

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
    bool empty() const noexcept { return rows() == 0; }

    void push(const std::vector<double>& row) {
        if (row.size() != columns.size()) throw std::invalid_argument("Series::push: row width mismatch");
        for (std::size_t k = 0; k < row.size(); ++k) columns[k].push_back(row[k]);
    }

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == name) return columns[k];
        throw std::out_of_range("Series: no column '" + name + "'");
    }
};

}  // namespace hystflow
