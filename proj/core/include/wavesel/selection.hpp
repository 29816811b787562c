#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/forest.hpp"
#include "wavesel/groups.hpp"
#include "wavesel/importance.hpp"

namespace wavesel {

enum class EliminationMethod {
    /// Refit and recompute importances after every elimination.
    recursive,
    /// Rank groups once on the full model and eliminate in that order.
    non_recursive,
};

std::string to_string(EliminationMethod method);

struct SelectionConfig {
    double train_fraction = 0.9;
    /// Forest settings; mtry = 0 means max(1, floor(P/3)) of the active columns at each step,
    /// and an explicit mtry is capped at the active column count. The seed is ignored: each
    /// step derives its own.
    ForestConfig forest;
    /// Rank groups by raw / |J| instead of raw.
    bool use_rescaled = true;
    std::size_t importance_repeats = 1;
    std::size_t runs = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainValidationSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Random split with round(n * train_fraction) training rows (at least 2, leaving at least
/// one validation row). Both index lists are sorted.
TrainValidationSplit split_rows(std::size_t n, double train_fraction, std::uint64_t seed);

struct SelectionStep {
    /// Indices into the family, in family order.
    std::vector<std::size_t> active;
    double validation_mse = 0.0;
    /// Importances of the active groups (aligned with `active`); empty when not computed at
    /// this step (non-recursive steps after the first).
    std::vector<ImportanceReport> importances;
    std::size_t eliminated = 0;
};

struct SelectionTrace {
    EliminationMethod method = EliminationMethod::recursive;
    std::vector<std::string> labels;
    std::vector<SelectionStep> steps;
    /// Step with the smallest validation MSE (ties go to the later, smaller model).
    std::size_t chosen_step = 0;
};

/// Backward elimination over a partition of the design columns. Every step fits a forest on
/// the training rows restricted to the active groups, scores it on the validation rows,
/// then drops the active group with the smallest (rescaled) grouped importance computed on
/// the training rows. Ties eliminate the larger group first, then the smaller label.
/// Throws InvalidInput "RFE requires a partition" for overlapping families.
SelectionTrace rfe_select(const Dataset& train, const Dataset& validation, const GroupFamily& family,
                          const SelectionConfig& config, std::uint64_t run_seed);

/// Convenience overload: splits `data` with split_rows(seed) and runs with that seed.
SelectionTrace rfe_select(const Dataset& data, const GroupFamily& family, const SelectionConfig& config);

/// Non-recursive variant: one importance ranking on the full model, then eliminate in
/// ascending order, refitting and scoring at each size.
SelectionTrace nrfe_select(const Dataset& train, const Dataset& validation, const GroupFamily& family,
                           const SelectionConfig& config, std::uint64_t run_seed);

SelectionTrace nrfe_select(const Dataset& data, const GroupFamily& family, const SelectionConfig& config);

/// Active groups at the MSE-minimizing step.
std::vector<std::size_t> choose_model(const SelectionTrace& trace);

struct AggregateReport {
    EliminationMethod method = EliminationMethod::recursive;
    std::vector<std::string> labels;
    std::vector<std::size_t> group_sizes;
    std::size_t runs = 0;
    /// Number of runs whose chosen model contains each group.
    std::vector<std::size_t> selection_count;
    /// mean_mse[k - 1]: validation MSE of the k-group model averaged over runs.
    std::vector<double> mean_mse;
    /// Group count minimizing mean_mse (ties go to fewer groups).
    std::size_t chosen_size = 0;
    /// Chosen model size of every run.
    std::vector<std::size_t> run_chosen_sizes;
    /// First-step importances, [group][run].
    std::vector<std::vector<double>> step1_raw;
    std::vector<std::vector<double>> step1_rescaled;
    std::vector<SelectionTrace> traces;

    double frequency(std::size_t group) const {
        return static_cast<double>(selection_count[group]) / static_cast<double>(runs);
    }
};

using DataGenerator = std::function<Dataset(std::uint64_t seed)>;

/// Data together with its own grouping, for pipelines whose design columns change from run
/// to run (e.g. after data-driven shrinkage). Every run must produce the same group labels
/// in the same order.
struct GroupedData {
    Dataset data;
    GroupFamily family;
};

using GroupedDataGenerator = std::function<GroupedData(std::uint64_t seed)>;

/// Runs `config.runs` independent selections, each on fresh data from `generator` and a
/// fresh train/validation split, and aggregates them.
AggregateReport repeat_selection(const DataGenerator& generator, const GroupFamily& family,
                                 const SelectionConfig& config, EliminationMethod method);

/// Runs on fresh data and a fresh grouping each time; groups are matched by label.
AggregateReport repeat_selection(const GroupedDataGenerator& generator, const SelectionConfig& config,
                                 EliminationMethod method);

/// Same on fixed data: only the split and the forest randomness change between runs.
AggregateReport repeat_selection(const Dataset& data, const GroupFamily& family, const SelectionConfig& config,
                                 EliminationMethod method);

} // namespace wavesel
