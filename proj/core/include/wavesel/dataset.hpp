#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wavesel {

using RowIndex = std::uint32_t;

/// Regression dataset: an n x P feature matrix stored column-major, the response vector
/// and one unique label per column.
class Dataset {
public:
    Dataset() = default;

    /// `column_major` holds P columns of `rows` values each. Throws InvalidInput unless
    /// rows >= 2, sizes agree, every value is finite and names are unique.
    Dataset(std::vector<double> column_major, std::vector<double> response, std::vector<std::string> names);

    /// Builds from a list of columns.
    static Dataset from_columns(const std::vector<std::vector<double>>& columns, std::vector<double> response,
                                std::vector<std::string> names);

    std::size_t rows() const { return response_.size(); }
    std::size_t cols() const { return names_.size(); }

    double at(std::size_t row, std::size_t col) const { return values_[col * rows() + row]; }
    std::span<const double> column(std::size_t col) const {
        return {values_.data() + col * rows(), rows()};
    }
    std::span<const double> response() const { return response_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t col) const { return names_[col]; }

    /// Copies row i into a length-P vector.
    std::vector<double> row(std::size_t i) const;

    /// New dataset with the given columns, in the given order.
    Dataset select_columns(std::span<const std::size_t> cols) const;

    /// New dataset with the given rows (duplicates allowed), in the given order.
    Dataset select_rows(std::span<const std::size_t> rows) const;

private:
    std::vector<double> values_;
    std::vector<double> response_;
    std::vector<std::string> names_;
};

} // namespace wavesel
