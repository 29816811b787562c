#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/panel.hpp"
#include "wavesel/wavelets.hpp"

namespace wavesel {

/// One design-matrix column: a wavelet coefficient of one functional variable.
struct CoefficientRef {
    std::size_t variable = 0;
    /// Detail level j, or kScalingLevel for the scaling coefficient.
    int level = 0;
    std::size_t position = 0;

    static constexpr int kScalingLevel = -1;
    bool is_scaling() const { return level == kScalingLevel; }
    bool operator==(const CoefficientRef&) const = default;
};

/// Bijection between design-matrix columns and (variable, level, position) triples.
///
/// A complete layout covers p * N columns, variable-major and in wavelet order within a
/// variable. A restricted layout (after shrinkage) keeps a subset of them.
class CoefficientLayout {
public:
    CoefficientLayout(std::vector<std::string> variables, std::size_t levels);

    /// Parses names of the form "<var>:zeta" and "<var>:d<j>_<k>". When levels is 0 it is
    /// inferred as (highest level found) + 1.
    static CoefficientLayout from_column_names(const std::vector<std::string>& names, std::size_t levels = 0);

    /// Layout of the given columns of this one, in the given order.
    CoefficientLayout restricted(std::span<const std::size_t> columns) const;

    std::size_t columns() const { return refs_.size(); }
    std::size_t levels() const { return levels_; }
    std::size_t length() const { return std::size_t{1} << levels_; }
    const std::vector<std::string>& variables() const { return variables_; }
    bool is_complete() const { return refs_.size() == variables_.size() * length(); }

    const CoefficientRef& column(std::size_t c) const { return refs_.at(c); }
    std::string column_name(std::size_t c) const;
    std::vector<std::string> column_names() const;

    /// Column holding (u, level, position), if present in the layout.
    std::optional<std::size_t> find(std::size_t variable, int level, std::size_t position) const;

private:
    CoefficientLayout(std::vector<std::string> variables, std::size_t levels, std::vector<CoefficientRef> refs);
    void build_index();

    std::vector<std::string> variables_;
    std::size_t levels_;
    std::vector<CoefficientRef> refs_;
    std::vector<std::ptrdiff_t> index_; // (u * N + wavelet-order index) -> column or -1
};

/// Design matrix whose columns follow `layout`, with the given outcome as response.
Dataset design_matrix(const CoefficientLayout& layout, const CoefficientPanel& coefficients,
                      std::vector<double> outcome);

/// Named set of design-matrix columns.
struct Group {
    std::string label;
    std::vector<std::size_t> columns;
};

/// Ordered list of groups; `partition` declares the groups pairwise disjoint.
struct GroupFamily {
    std::vector<Group> groups;
    bool partition = false;

    /// Sorted union of all group columns.
    std::vector<std::size_t> universe() const;
    bool pairwise_disjoint() const;

    /// Throws InvalidInput for empty groups, duplicate or out-of-range columns, duplicate
    /// labels, or a partition flag that the groups do not honor.
    void validate(std::size_t num_columns) const;

    /// Re-indexes the groups onto the sub-design made of `kept` columns (kept[i] becomes
    /// column i). Groups left empty are dropped.
    GroupFamily restricted(std::span<const std::size_t> kept) const;
};

/// G(u): every coefficient of variable u.
Group by_variable(const CoefficientLayout& layout, std::size_t variable);
/// G(j, u): the detail coefficients of variable u at level j (positions 0..2^j-1).
Group by_level_and_variable(const CoefficientLayout& layout, std::size_t level, std::size_t variable);
/// G(j): level j of every variable.
Group by_level(const CoefficientLayout& layout, std::size_t level);
/// G_zeta: scaling coefficients of every variable.
Group scaling_group(const CoefficientLayout& layout);
/// Scaling coefficient of a single variable.
Group scaling_group(const CoefficientLayout& layout, std::size_t variable);
/// G(t): every scaling coefficient plus the details in S(t), for all variables.
Group at_time(const CoefficientLayout& layout, const SupportTable& supports, std::size_t sample);
Group at_time(const CoefficientLayout& layout, const SupportTable& supports, double t);
/// G([a, b]): union of G(t) over the grid samples first..last.
Group on_interval(const CoefficientLayout& layout, const SupportTable& supports, std::size_t first, std::size_t last);
Group on_interval(const CoefficientLayout& layout, const SupportTable& supports, double a, double b);

/// {G(u)} for every variable. A partition of all columns.
GroupFamily variable_family(const CoefficientLayout& layout);
/// {G_zeta, G(0), ..., G(J-1)}. A partition of all columns.
GroupFamily level_family(const CoefficientLayout& layout);
/// {G_zeta(u), G(0,u), ..., G(J-1,u)}. A partition of the columns of variable u.
GroupFamily level_family(const CoefficientLayout& layout, std::size_t variable);
/// {G(t)} for the given samples. Overlapping, so not a partition.
GroupFamily time_family(const CoefficientLayout& layout, const SupportTable& supports,
                        std::span<const std::size_t> samples);
/// One singleton group per column, labelled with the column name.
GroupFamily column_family(const std::vector<std::string>& names);

} // namespace wavesel
