#include "wavesel/groups.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "wavesel/error.hpp"

namespace wavesel {

namespace {

std::size_t wavelet_index(const CoefficientRef& r) {
    return r.is_scaling() ? 0 : WaveletDecomposition::index(static_cast<std::size_t>(r.level), r.position);
}

std::size_t parse_size(std::string_view text, const std::string& whole) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw InvalidInput("cannot parse coefficient column name '" + whole + "'");
    }
    return value;
}

Group require_nonempty(Group g) {
    if (g.columns.empty()) {
        throw InvalidInput("group " + g.label + " has no columns in this layout");
    }
    return g;
}

} // namespace

CoefficientLayout::CoefficientLayout(std::vector<std::string> variables, std::size_t levels)
    : variables_(std::move(variables)), levels_(levels) {
    if (variables_.empty()) {
        throw InvalidInput("layout needs at least one variable");
    }
    if (levels_ == 0 || levels_ > 30) {
        throw InvalidInput("layout needs 1 <= J <= 30 levels");
    }
    refs_.reserve(variables_.size() * length());
    for (std::size_t u = 0; u < variables_.size(); ++u) {
        refs_.push_back({u, CoefficientRef::kScalingLevel, 0});
        for (std::size_t j = 0; j < levels_; ++j) {
            for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
                refs_.push_back({u, static_cast<int>(j), k});
            }
        }
    }
    build_index();
}

CoefficientLayout::CoefficientLayout(std::vector<std::string> variables, std::size_t levels,
                                     std::vector<CoefficientRef> refs)
    : variables_(std::move(variables)), levels_(levels), refs_(std::move(refs)) {
    build_index();
}

void CoefficientLayout::build_index() {
    index_.assign(variables_.size() * length(), -1);
    for (std::size_t c = 0; c < refs_.size(); ++c) {
        const auto& r = refs_[c];
        if (r.variable >= variables_.size() ||
            (!r.is_scaling() && (r.level < 0 || static_cast<std::size_t>(r.level) >= levels_ ||
                                 r.position >= (std::size_t{1} << r.level))) ||
            (r.is_scaling() && r.position != 0)) {
            throw InvalidInput("coefficient reference outside the layout");
        }
        auto& slot = index_[r.variable * length() + wavelet_index(r)];
        if (slot >= 0) {
            throw InvalidInput("coefficient " + column_name(c) + " appears twice in the layout");
        }
        slot = static_cast<std::ptrdiff_t>(c);
    }
}

CoefficientLayout CoefficientLayout::from_column_names(const std::vector<std::string>& names, std::size_t levels) {
    std::vector<std::string> variables;
    std::vector<CoefficientRef> refs;
    std::size_t highest = 0;
    for (const auto& name : names) {
        const auto colon = name.rfind(':');
        if (colon == std::string::npos || colon == 0) {
            throw InvalidInput("column '" + name + "' is not a wavelet coefficient name (<var>:zeta or <var>:d<j>_<k>)");
        }
        const std::string var = name.substr(0, colon);
        const std::string_view tag = std::string_view(name).substr(colon + 1);
        auto it = std::find(variables.begin(), variables.end(), var);
        const auto u = static_cast<std::size_t>(it - variables.begin());
        if (it == variables.end()) {
            variables.push_back(var);
        }
        if (tag == "zeta") {
            refs.push_back({u, CoefficientRef::kScalingLevel, 0});
            continue;
        }
        const auto underscore = tag.find('_');
        if (tag.size() < 2 || tag[0] != 'd' || underscore == std::string_view::npos) {
            throw InvalidInput("column '" + name + "' is not a wavelet coefficient name (<var>:zeta or <var>:d<j>_<k>)");
        }
        const auto j = parse_size(tag.substr(1, underscore - 1), name);
        const auto k = parse_size(tag.substr(underscore + 1), name);
        highest = std::max(highest, j);
        refs.push_back({u, static_cast<int>(j), k});
    }
    if (variables.empty()) {
        throw InvalidInput("no coefficient columns");
    }
    if (levels == 0) {
        levels = highest + 1;
    }
    return CoefficientLayout(std::move(variables), levels, std::move(refs));
}

CoefficientLayout CoefficientLayout::restricted(std::span<const std::size_t> columns) const {
    std::vector<CoefficientRef> refs;
    refs.reserve(columns.size());
    for (const auto c : columns) {
        refs.push_back(column(c));
    }
    return CoefficientLayout(variables_, levels_, std::move(refs));
}

std::string CoefficientLayout::column_name(std::size_t c) const {
    const auto& r = refs_.at(c);
    if (r.is_scaling()) {
        return variables_[r.variable] + ":zeta";
    }
    return variables_[r.variable] + ":d" + std::to_string(r.level) + "_" + std::to_string(r.position);
}

std::vector<std::string> CoefficientLayout::column_names() const {
    std::vector<std::string> names;
    names.reserve(refs_.size());
    for (std::size_t c = 0; c < refs_.size(); ++c) {
        names.push_back(column_name(c));
    }
    return names;
}

std::optional<std::size_t> CoefficientLayout::find(std::size_t variable, int level, std::size_t position) const {
    if (variable >= variables_.size()) {
        return std::nullopt;
    }
    const CoefficientRef r{variable, level, position};
    if (!r.is_scaling() && (level < 0 || static_cast<std::size_t>(level) >= levels_ ||
                            position >= (std::size_t{1} << level))) {
        return std::nullopt;
    }
    const auto slot = index_[variable * length() + wavelet_index(r)];
    if (slot < 0) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(slot);
}

Dataset design_matrix(const CoefficientLayout& layout, const CoefficientPanel& coefficients,
                      std::vector<double> outcome) {
    if (coefficients.length != layout.length()) {
        throw InvalidInput("coefficient length " + std::to_string(coefficients.length) +
                           " does not match the layout length " + std::to_string(layout.length()));
    }
    if (coefficients.variables.size() != layout.variables().size()) {
        throw InvalidInput("coefficient panel and layout disagree on the number of variables");
    }
    if (outcome.size() != coefficients.curves) {
        throw InvalidInput("outcome has " + std::to_string(outcome.size()) + " values for " +
                           std::to_string(coefficients.curves) + " curves");
    }
    const std::size_t n = coefficients.curves;
    std::vector<double> values(layout.columns() * n);
    for (std::size_t c = 0; c < layout.columns(); ++c) {
        const auto& r = layout.column(c);
        const std::size_t w = wavelet_index(r);
        const auto& block = coefficients.values[r.variable];
        for (std::size_t i = 0; i < n; ++i) {
            values[c * n + i] = block[i * coefficients.length + w];
        }
    }
    return Dataset(std::move(values), std::move(outcome), layout.column_names());
}

std::vector<std::size_t> GroupFamily::universe() const {
    std::set<std::size_t> all;
    for (const auto& g : groups) {
        all.insert(g.columns.begin(), g.columns.end());
    }
    return {all.begin(), all.end()};
}

bool GroupFamily::pairwise_disjoint() const {
    std::size_t total = 0;
    for (const auto& g : groups) {
        total += g.columns.size();
    }
    return universe().size() == total;
}

void GroupFamily::validate(std::size_t num_columns) const {
    std::unordered_set<std::string> labels;
    for (const auto& g : groups) {
        if (g.columns.empty()) {
            throw InvalidInput("group '" + g.label + "' is empty");
        }
        if (!labels.insert(g.label).second) {
            throw InvalidInput("duplicate group label '" + g.label + "'");
        }
        std::unordered_set<std::size_t> seen;
        for (const auto c : g.columns) {
            if (c >= num_columns) {
                throw InvalidInput("group '" + g.label + "' refers to column " + std::to_string(c) +
                                   " outside the design (" + std::to_string(num_columns) + " columns)");
            }
            if (!seen.insert(c).second) {
                throw InvalidInput("group '" + g.label + "' lists column " + std::to_string(c) + " twice");
            }
        }
    }
    if (partition && !pairwise_disjoint()) {
        throw InvalidInput("family is flagged as a partition but its groups overlap");
    }
}

GroupFamily GroupFamily::restricted(std::span<const std::size_t> kept) const {
    std::unordered_map<std::size_t, std::size_t> remap;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        remap.emplace(kept[i], i);
    }
    GroupFamily out;
    out.partition = partition;
    for (const auto& g : groups) {
        Group r{g.label, {}};
        for (const auto c : g.columns) {
            if (const auto it = remap.find(c); it != remap.end()) {
                r.columns.push_back(it->second);
            }
        }
        if (!r.columns.empty()) {
            std::sort(r.columns.begin(), r.columns.end());
            out.groups.push_back(std::move(r));
        }
    }
    return out;
}

Group by_variable(const CoefficientLayout& layout, std::size_t variable) {
    if (variable >= layout.variables().size()) {
        throw InvalidInput("variable index " + std::to_string(variable) + " out of range");
    }
    Group g{layout.variables()[variable], {}};
    for (std::size_t c = 0; c < layout.columns(); ++c) {
        if (layout.column(c).variable == variable) {
            g.columns.push_back(c);
        }
    }
    return require_nonempty(std::move(g));
}

Group by_level_and_variable(const CoefficientLayout& layout, std::size_t level, std::size_t variable) {
    if (variable >= layout.variables().size() || level >= layout.levels()) {
        throw InvalidInput("invalid (level, variable) = (" + std::to_string(level) + ", " + std::to_string(variable) +
                           ")");
    }
    Group g{"G(" + std::to_string(level) + "," + layout.variables()[variable] + ")", {}};
    for (std::size_t c = 0; c < layout.columns(); ++c) {
        const auto& r = layout.column(c);
        if (r.variable == variable && r.level == static_cast<int>(level)) {
            g.columns.push_back(c);
        }
    }
    return require_nonempty(std::move(g));
}

Group by_level(const CoefficientLayout& layout, std::size_t level) {
    if (level >= layout.levels()) {
        throw InvalidInput("level " + std::to_string(level) + " out of range");
    }
    Group g{"G(" + std::to_string(level) + ")", {}};
    for (std::size_t c = 0; c < layout.columns(); ++c) {
        if (layout.column(c).level == static_cast<int>(level)) {
            g.columns.push_back(c);
        }
    }
    return require_nonempty(std::move(g));
}

Group scaling_group(const CoefficientLayout& layout) {
    Group g{"G_zeta", {}};
    for (std::size_t c = 0; c < layout.columns(); ++c) {
        if (layout.column(c).is_scaling()) {
            g.columns.push_back(c);
        }
    }
    return require_nonempty(std::move(g));
}

Group scaling_group(const CoefficientLayout& layout, std::size_t variable) {
    if (variable >= layout.variables().size()) {
        throw InvalidInput("variable index " + std::to_string(variable) + " out of range");
    }
    Group g{"G_zeta(" + layout.variables()[variable] + ")", {}};
    if (const auto c = layout.find(variable, CoefficientRef::kScalingLevel, 0)) {
        g.columns.push_back(*c);
    }
    return require_nonempty(std::move(g));
}

namespace {

void add_time_columns(const CoefficientLayout& layout, const std::vector<LevelPosition>& support,
                      std::set<std::size_t>& out) {
    for (std::size_t u = 0; u < layout.variables().size(); ++u) {
        if (const auto c = layout.find(u, CoefficientRef::kScalingLevel, 0)) {
            out.insert(*c);
        }
        for (const auto& lp : support) {
            if (const auto c = layout.find(u, static_cast<int>(lp.level), lp.position)) {
                out.insert(*c);
            }
        }
    }
}

void check_support_table(const CoefficientLayout& layout, const SupportTable& supports) {
    if (supports.levels() != layout.levels()) {
        throw InvalidInput("support table depth differs from the layout depth");
    }
}

std::string time_label(double t) {
    std::string s = std::to_string(t);
    while (s.size() > 1 && s.back() == '0') {
        s.pop_back();
    }
    if (s.back() == '.') {
        s.pop_back();
    }
    return s;
}

} // namespace

Group at_time(const CoefficientLayout& layout, const SupportTable& supports, std::size_t sample) {
    check_support_table(layout, supports);
    std::set<std::size_t> cols;
    add_time_columns(layout, supports.at_sample(sample), cols);
    Group g{"G(t=" + time_label(sample_to_time(sample, layout.length())) + ")", {cols.begin(), cols.end()}};
    return require_nonempty(std::move(g));
}

Group at_time(const CoefficientLayout& layout, const SupportTable& supports, double t) {
    return at_time(layout, supports, time_to_sample(t, layout.length()));
}

Group on_interval(const CoefficientLayout& layout, const SupportTable& supports, std::size_t first,
                  std::size_t last) {
    check_support_table(layout, supports);
    if (first > last || last >= layout.length()) {
        throw InvalidInput("empty or out-of-range sample interval");
    }
    std::set<std::size_t> cols;
    for (std::size_t s = first; s <= last; ++s) {
        add_time_columns(layout, supports.at_sample(s), cols);
    }
    const double n = static_cast<double>(layout.length());
    Group g{"G([" + time_label((first + 1) / n) + "," + time_label((last + 1) / n) + "])", {cols.begin(), cols.end()}};
    return require_nonempty(std::move(g));
}

Group on_interval(const CoefficientLayout& layout, const SupportTable& supports, double a, double b) {
    if (!(a <= b)) {
        throw InvalidInput("interval bounds must satisfy a <= b");
    }
    const double n = static_cast<double>(layout.length());
    const auto first = std::max(static_cast<long long>(std::ceil(a * n - 1e-9)), 1LL);
    const auto last = std::min(static_cast<long long>(std::floor(b * n + 1e-9)), static_cast<long long>(layout.length()));
    if (first > last) {
        throw InvalidInput("interval contains no grid time");
    }
    return on_interval(layout, supports, static_cast<std::size_t>(first - 1), static_cast<std::size_t>(last - 1));
}

GroupFamily variable_family(const CoefficientLayout& layout) {
    GroupFamily f;
    f.partition = true;
    for (std::size_t u = 0; u < layout.variables().size(); ++u) {
        f.groups.push_back(by_variable(layout, u));
    }
    return f;
}

GroupFamily level_family(const CoefficientLayout& layout) {
    GroupFamily f;
    f.partition = true;
    f.groups.push_back(scaling_group(layout));
    for (std::size_t j = 0; j < layout.levels(); ++j) {
        bool present = false;
        for (std::size_t c = 0; c < layout.columns() && !present; ++c) {
            present = layout.column(c).level == static_cast<int>(j);
        }
        if (present) {
            f.groups.push_back(by_level(layout, j));
        }
    }
    return f;
}

GroupFamily level_family(const CoefficientLayout& layout, std::size_t variable) {
    GroupFamily f;
    f.partition = true;
    f.groups.push_back(scaling_group(layout, variable));
    for (std::size_t j = 0; j < layout.levels(); ++j) {
        Group g{"G(" + std::to_string(j) + "," + layout.variables()[variable] + ")", {}};
        for (std::size_t c = 0; c < layout.columns(); ++c) {
            const auto& r = layout.column(c);
            if (r.variable == variable && r.level == static_cast<int>(j)) {
                g.columns.push_back(c);
            }
        }
        if (!g.columns.empty()) {
            f.groups.push_back(std::move(g));
        }
    }
    return f;
}

GroupFamily time_family(const CoefficientLayout& layout, const SupportTable& supports,
                        std::span<const std::size_t> samples) {
    GroupFamily f;
    f.partition = false;
    for (const auto s : samples) {
        f.groups.push_back(at_time(layout, supports, s));
    }
    return f;
}

GroupFamily column_family(const std::vector<std::string>& names) {
    GroupFamily f;
    f.partition = true;
    for (std::size_t c = 0; c < names.size(); ++c) {
        f.groups.push_back({names[c], {c}});
    }
    return f;
}

} // namespace wavesel
