#include "wavesel/dataset.hpp"

#include <cmath>
#include <unordered_set>

#include "wavesel/error.hpp"

namespace wavesel {

Dataset::Dataset(std::vector<double> column_major, std::vector<double> response, std::vector<std::string> names)
    : values_(std::move(column_major)), response_(std::move(response)), names_(std::move(names)) {
    if (response_.size() < 2) {
        throw InvalidInput("dataset needs at least 2 rows");
    }
    if (values_.size() != response_.size() * names_.size()) {
        throw InvalidInput("dataset shape mismatch: " + std::to_string(values_.size()) + " values for " +
                           std::to_string(response_.size()) + " rows x " + std::to_string(names_.size()) + " columns");
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) {
            throw InvalidInput("duplicate column name '" + name + "'");
        }
    }
    for (const double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidInput("dataset contains a non-finite feature value");
        }
    }
    for (const double v : response_) {
        if (!std::isfinite(v)) {
            throw InvalidInput("dataset contains a non-finite response value");
        }
    }
}

Dataset Dataset::from_columns(const std::vector<std::vector<double>>& columns, std::vector<double> response,
                              std::vector<std::string> names) {
    std::vector<double> values;
    values.reserve(columns.size() * response.size());
    for (const auto& c : columns) {
        if (c.size() != response.size()) {
            throw InvalidInput("column length differs from response length");
        }
        values.insert(values.end(), c.begin(), c.end());
    }
    return Dataset(std::move(values), std::move(response), std::move(names));
}

std::vector<double> Dataset::row(std::size_t i) const {
    std::vector<double> out(cols());
    for (std::size_t j = 0; j < cols(); ++j) {
        out[j] = at(i, j);
    }
    return out;
}

Dataset Dataset::select_columns(std::span<const std::size_t> cols) const {
    std::vector<double> values;
    values.reserve(cols.size() * rows());
    std::vector<std::string> names;
    names.reserve(cols.size());
    for (const auto c : cols) {
        if (c >= this->cols()) {
            throw InvalidInput("column index out of range");
        }
        const auto col = column(c);
        values.insert(values.end(), col.begin(), col.end());
        names.push_back(names_[c]);
    }
    return Dataset(std::move(values), response_, std::move(names));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<double> values;
    values.reserve(rows.size() * cols());
    for (std::size_t c = 0; c < cols(); ++c) {
        const auto col = column(c);
        for (const auto r : rows) {
            if (r >= this->rows()) {
                throw InvalidInput("row index out of range");
            }
            values.push_back(col[r]);
        }
    }
    std::vector<double> response;
    response.reserve(rows.size());
    for (const auto r : rows) {
        response.push_back(response_[r]);
    }
    return Dataset(std::move(values), std::move(response), names_);
}

} // namespace wavesel
