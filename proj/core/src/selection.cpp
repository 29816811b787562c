#include "wavesel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavesel/error.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

std::string to_string(EliminationMethod method) {
    return method == EliminationMethod::recursive ? "rfe" : "nrfe";
}

void SelectionConfig::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidInput("train_fraction must lie in (0, 1)");
    }
    if (runs == 0) {
        throw InvalidInput("runs must be at least 1");
    }
    if (importance_repeats == 0) {
        throw InvalidInput("importance repeats must be at least 1");
    }
    if (forest.num_trees == 0 || forest.min_leaf_size == 0) {
        throw InvalidInput("invalid forest configuration");
    }
}

TrainValidationSplit split_rows(std::size_t n, double train_fraction, std::uint64_t seed) {
    if (n < 3) {
        throw InvalidInput("a train/validation split needs at least 3 rows");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidInput("train_fraction must lie in (0, 1)");
    }
    auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
    n_train = std::clamp<std::size_t>(n_train, 2, n - 1);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span(order));
    TrainValidationSplit split;
    split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    return split;
}

namespace {

struct StepModel {
    double validation_mse = 0.0;
    std::vector<ImportanceReport> importances;
};

void check_family(const GroupFamily& family, const Dataset& train, const Dataset& validation) {
    if (train.cols() != validation.cols()) {
        throw InvalidInput("training and validation data have different columns");
    }
    if (family.groups.empty()) {
        throw InvalidInput("selection needs at least one group");
    }
    family.validate(train.cols());
    if (!family.pairwise_disjoint()) {
        throw InvalidInput("RFE requires a partition");
    }
}

// Fits the step model on the active groups; importances are computed when requested.
StepModel fit_step(const Dataset& train, const Dataset& validation, const GroupFamily& family,
                   const std::vector<std::size_t>& active, const SelectionConfig& config, std::uint64_t run_seed,
                   std::size_t step, bool with_importance) {
    std::vector<std::size_t> columns;
    for (const auto g : active) {
        const auto& cols = family.groups[g].columns;
        columns.insert(columns.end(), cols.begin(), cols.end());
    }
    std::sort(columns.begin(), columns.end());

    const Dataset sub_train = train.select_columns(columns);
    const Dataset sub_validation = validation.select_columns(columns);

    ForestConfig forest = config.forest;
    forest.seed = derive_seed(run_seed, {step, 1});
    if (forest.mtry > columns.size()) {
        forest.mtry = columns.size();
    }
    const Forest model = fit_forest(sub_train, forest);

    StepModel out;
    out.validation_mse = mean_squared_error(model, sub_validation);
    if (with_importance) {
        GroupFamily sub;
        for (const auto g : active) {
            sub.groups.push_back(family.groups[g]);
        }
        sub = sub.restricted(columns);
        ImportanceOptions opts;
        opts.seed = derive_seed(run_seed, {step, 2});
        opts.repeats = config.importance_repeats;
        opts.threads = config.forest.threads;
        out.importances = importance_table(model, sub_train, sub, opts);
    }
    return out;
}

// Position in `active` of the group to eliminate first.
std::vector<std::size_t> elimination_order(const std::vector<std::size_t>& active,
                                           const std::vector<ImportanceReport>& importances,
                                           const GroupFamily& family, bool use_rescaled) {
    std::vector<std::size_t> order(active.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ka = use_rescaled ? importances[a].rescaled : importances[a].raw;
        const double kb = use_rescaled ? importances[b].rescaled : importances[b].raw;
        if (ka != kb) {
            return ka < kb;
        }
        const auto& ga = family.groups[active[a]];
        const auto& gb = family.groups[active[b]];
        if (ga.columns.size() != gb.columns.size()) {
            return ga.columns.size() > gb.columns.size();
        }
        return ga.label < gb.label;
    });
    return order;
}

std::size_t argmin_mse(const std::vector<SelectionStep>& steps) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < steps.size(); ++s) {
        if (steps[s].validation_mse <= steps[best].validation_mse) {
            best = s;
        }
    }
    return best;
}

std::vector<std::string> labels_of(const GroupFamily& family) {
    std::vector<std::string> labels;
    for (const auto& g : family.groups) {
        labels.push_back(g.label);
    }
    return labels;
}

} // namespace

SelectionTrace rfe_select(const Dataset& train, const Dataset& validation, const GroupFamily& family,
                          const SelectionConfig& config, std::uint64_t run_seed) {
    config.validate();
    check_family(family, train, validation);

    SelectionTrace trace;
    trace.method = EliminationMethod::recursive;
    trace.labels = labels_of(family);
    std::vector<std::size_t> active(family.groups.size());
    std::iota(active.begin(), active.end(), std::size_t{0});

    for (std::size_t step = 0; !active.empty(); ++step) {
        auto model = fit_step(train, validation, family, active, config, run_seed, step, true);
        const auto order = elimination_order(active, model.importances, family, config.use_rescaled);
        SelectionStep s;
        s.active = active;
        s.validation_mse = model.validation_mse;
        s.importances = std::move(model.importances);
        s.eliminated = active[order.front()];
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(order.front()));
        trace.steps.push_back(std::move(s));
    }
    trace.chosen_step = argmin_mse(trace.steps);
    return trace;
}

SelectionTrace nrfe_select(const Dataset& train, const Dataset& validation, const GroupFamily& family,
                           const SelectionConfig& config, std::uint64_t run_seed) {
    config.validate();
    check_family(family, train, validation);

    SelectionTrace trace;
    trace.method = EliminationMethod::non_recursive;
    trace.labels = labels_of(family);
    std::vector<std::size_t> active(family.groups.size());
    std::iota(active.begin(), active.end(), std::size_t{0});

    std::vector<std::size_t> ranking;
    for (std::size_t step = 0; !active.empty(); ++step) {
        auto model = fit_step(train, validation, family, active, config, run_seed, step, step == 0);
        if (step == 0) {
            for (const auto pos : elimination_order(active, model.importances, family, config.use_rescaled)) {
                ranking.push_back(active[pos]);
            }
        }
        SelectionStep s;
        s.active = active;
        s.validation_mse = model.validation_mse;
        s.importances = std::move(model.importances);
        s.eliminated = ranking[step];
        active.erase(std::find(active.begin(), active.end(), ranking[step]));
        trace.steps.push_back(std::move(s));
    }
    trace.chosen_step = argmin_mse(trace.steps);
    return trace;
}

SelectionTrace rfe_select(const Dataset& data, const GroupFamily& family, const SelectionConfig& config) {
    const auto split = split_rows(data.rows(), config.train_fraction, derive_seed(config.seed, {0, 11}));
    return rfe_select(data.select_rows(split.train), data.select_rows(split.validation), family, config,
                      derive_seed(config.seed, {0}));
}

SelectionTrace nrfe_select(const Dataset& data, const GroupFamily& family, const SelectionConfig& config) {
    const auto split = split_rows(data.rows(), config.train_fraction, derive_seed(config.seed, {0, 11}));
    return nrfe_select(data.select_rows(split.train), data.select_rows(split.validation), family, config,
                       derive_seed(config.seed, {0}));
}

std::vector<std::size_t> choose_model(const SelectionTrace& trace) {
    if (trace.steps.empty()) {
        throw InvalidInput("cannot choose a model from an empty trace");
    }
    return trace.steps[argmin_mse(trace.steps)].active;
}

namespace {

AggregateReport aggregate(const std::function<GroupedData(std::size_t run)>& data_for_run, const GroupFamily& family,
                          const SelectionConfig& config, EliminationMethod method) {
    config.validate();
    const std::size_t groups = family.groups.size();
    AggregateReport report;
    report.method = method;
    report.labels = labels_of(family);
    for (const auto& g : family.groups) {
        report.group_sizes.push_back(g.columns.size());
    }
    report.runs = config.runs;
    report.selection_count.assign(groups, 0);
    report.mean_mse.assign(groups, 0.0);
    report.step1_raw.assign(groups, std::vector<double>(config.runs, 0.0));
    report.step1_rescaled.assign(groups, std::vector<double>(config.runs, 0.0));

    for (std::size_t run = 0; run < config.runs; ++run) {
        try {
            const auto grouped = data_for_run(run);
            const Dataset& data = grouped.data;
            if (labels_of(grouped.family) != report.labels) {
                throw InvalidInput("group labels differ from the first run");
            }
            const auto split =
                split_rows(data.rows(), config.train_fraction, derive_seed(config.seed, {run, 11}));
            const Dataset train = data.select_rows(split.train);
            const Dataset validation = data.select_rows(split.validation);
            const auto run_seed = derive_seed(config.seed, {run});
            auto trace = method == EliminationMethod::recursive
                             ? rfe_select(train, validation, grouped.family, config, run_seed)
                             : nrfe_select(train, validation, grouped.family, config, run_seed);

            for (const auto g : choose_model(trace)) {
                ++report.selection_count[g];
            }
            report.run_chosen_sizes.push_back(trace.steps[trace.chosen_step].active.size());
            for (const auto& step : trace.steps) {
                report.mean_mse[step.active.size() - 1] += step.validation_mse;
            }
            const auto& first = trace.steps.front();
            for (std::size_t i = 0; i < first.active.size(); ++i) {
                report.step1_raw[first.active[i]][run] = first.importances[i].raw;
                report.step1_rescaled[first.active[i]][run] = first.importances[i].rescaled;
            }
            report.traces.push_back(std::move(trace));
        } catch (const InvalidInput& e) {
            throw InvalidInput("selection run " + std::to_string(run) + ": " + e.what());
        } catch (const NumericalError& e) {
            throw NumericalError("selection run " + std::to_string(run) + ": " + e.what());
        }
    }
    for (auto& v : report.mean_mse) {
        v /= static_cast<double>(config.runs);
    }
    std::size_t best = groups;
    for (std::size_t k = groups - 1; k >= 1; --k) {
        if (report.mean_mse[k - 1] <= report.mean_mse[best - 1]) {
            best = k;
        }
    }
    report.chosen_size = best;
    return report;
}

} // namespace

AggregateReport repeat_selection(const DataGenerator& generator, const GroupFamily& family,
                                 const SelectionConfig& config, EliminationMethod method) {
    return aggregate(
        [&](std::size_t run) {
            return GroupedData{generator(derive_seed(config.seed, {run, 7})), family};
        },
        family, config, method);
}

AggregateReport repeat_selection(const GroupedDataGenerator& generator, const SelectionConfig& config,
                                 EliminationMethod method) {
    config.validate();
    auto first = generator(derive_seed(config.seed, {0, 7}));
    const GroupFamily family = first.family;
    return aggregate(
        [&](std::size_t run) {
            if (run == 0) {
                return std::move(first);
            }
            return generator(derive_seed(config.seed, {run, 7}));
        },
        family, config, method);
}

AggregateReport repeat_selection(const Dataset& data, const GroupFamily& family, const SelectionConfig& config,
                                 EliminationMethod method) {
    return aggregate([&](std::size_t) { return GroupedData{data, family}; }, family, config, method);
}

} // namespace wavesel
