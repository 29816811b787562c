#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/forest.hpp"
#include "wavesel/groups.hpp"
#include "wavesel/importance.hpp"
#include "wavesel/panel.hpp"
#include "wavesel/pipeline.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/shrinkage.hpp"
#include "wavesel/simulation.hpp"

namespace wavesel {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Parses a finite decimal number; throws InvalidInput otherwise.
double parse_double(std::string_view text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws InvalidInput when absent.
    std::size_t column(std::string_view name) const;
};

/// Comma-separated values with a header row. Double-quoted fields may contain commas.
/// Throws InvalidInput for empty input or rows whose width differs from the header.
CsvTable parse_csv(std::string_view text);
std::string to_csv(const CsvTable& table);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary file next to `path`, then renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Curve panel in long form: curve_id, variable, t_index (1..N), value. Curves are ordered by
/// id, variables by first appearance.
struct PanelFile {
    CurvePanel panel;
    std::vector<std::int64_t> curve_ids;
};

PanelFile parse_panel_csv(std::string_view text);
std::string panel_to_csv(const CurvePanel& panel, const std::vector<std::int64_t>& curve_ids = {});

/// Outcome file: curve_id, Y. Values are returned in the order of `curve_ids`.
std::vector<double> parse_outcome_csv(std::string_view text, const std::vector<std::int64_t>& curve_ids);
std::string outcome_to_csv(const std::vector<double>& outcome, const std::vector<std::int64_t>& curve_ids = {});

/// Coefficients in long form: curve_id, variable, level, position, value (zeta at level -1).
struct CoefficientFile {
    CoefficientPanel coefficients;
    std::vector<std::int64_t> curve_ids;
};

CoefficientFile parse_coefficients_csv(std::string_view text);
std::string coefficients_to_csv(const CoefficientPanel& coefficients, const std::vector<std::int64_t>& curve_ids = {});

/// Design matrix: one column per feature and a final column named Y.
Dataset parse_dataset_csv(std::string_view text);
std::string dataset_to_csv(const Dataset& data);

/// Versioned JSON document with the config, node arrays and bootstrap samples.
std::string forest_to_json(const Forest& forest);
Forest forest_from_json(std::string_view text);

/// {"partition": bool, "groups": [{"label": ..., "columns": [...]}]}
std::string family_to_json(const GroupFamily& family);
GroupFamily family_from_json(std::string_view text);

/// group, size, raw, rescaled, trees_used
std::string importance_to_csv(const std::vector<ImportanceReport>& reports);

/// One row per step: step, groups, validation_mse, eliminated, chosen.
std::string trace_to_csv(const SelectionTrace& trace);
/// Importances recorded along a trace: step, group, size, raw, rescaled, trees_used.
std::string trace_importance_to_csv(const SelectionTrace& trace);

/// One row per group: group, size, selected, frequency, step1_raw_mean, step1_rescaled_mean.
std::string aggregate_groups_to_csv(const AggregateReport& report);
/// One row per model size: groups, mean_mse.
std::string aggregate_curve_to_csv(const AggregateReport& report);
/// One row per run: run, chosen_groups, then one column per group with 0/1 membership.
std::string aggregate_runs_to_csv(const AggregateReport& report);

/// t, sample, mean, q25, q75.
std::string timescan_to_csv(const TimeScan& scan);

/// p, replicate, grouped, rescaled, sum_individual.
std::string group_versus_individual_to_csv(const std::vector<GroupVersusIndividual>& rows);

/// Kept details ("d<j>_<k>") with threshold, sigma_hat and q per variable.
std::string shrinkage_to_json(const PanelShrinkage& shrinkage, const std::vector<std::string>& variables);

} // namespace wavesel
