#include "wavesel/pipeline.hpp"

#include "wavesel/error.hpp"
#include "wavesel/importance.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

WaveletDesign wavelet_design(const CurvePanel& panel, const std::vector<double>& outcome, const WaveletFilter& filter,
                             const std::optional<ShrinkageConfig>& shrink) {
    auto coeffs = decompose(panel, filter);
    const CoefficientLayout complete(panel.variables, coeffs.levels());
    if (!shrink) {
        return WaveletDesign{complete, design_matrix(complete, coeffs, outcome), std::nullopt};
    }
    auto reduced = shrink_panel(coeffs, complete, *shrink);
    const auto layout = complete.restricted(reduced.kept_columns);
    return WaveletDesign{layout, design_matrix(layout, coeffs, outcome), std::move(reduced)};
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::by_variable:
        return "by_variable";
    case Scheme::by_level:
        return "by_level";
    case Scheme::by_level_and_variable:
        return "by_level_and_variable";
    case Scheme::by_column:
        return "by_column";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    for (const auto s : {Scheme::by_variable, Scheme::by_level, Scheme::by_level_and_variable, Scheme::by_column}) {
        if (name == to_string(s)) {
            return s;
        }
    }
    throw InvalidInput("unknown grouping scheme '" + std::string(name) + "'");
}

GroupFamily make_family(const CoefficientLayout& layout, Scheme scheme) {
    switch (scheme) {
    case Scheme::by_variable:
        return variable_family(layout);
    case Scheme::by_level:
        return level_family(layout);
    case Scheme::by_level_and_variable: {
        GroupFamily f;
        f.partition = true;
        for (std::size_t u = 0; u < layout.variables().size(); ++u) {
            for (auto& g : level_family(layout, u).groups) {
                f.groups.push_back(std::move(g));
            }
        }
        return f;
    }
    case Scheme::by_column:
        return column_family(layout.column_names());
    }
    throw InvalidInput("unknown grouping scheme");
}

SelectionConfig desk_selection_config(const DeskScale& scale, std::uint64_t seed) {
    SelectionConfig config;
    config.forest.num_trees = scale.trees;
    config.forest.mtry = scale.mtry;
    config.forest.min_leaf_size = scale.min_leaf_size;
    config.forest.threads = scale.threads;
    config.runs = scale.runs;
    config.seed = seed;
    return config;
}

AggregateReport run_experiment2(Link link, EliminationMethod method, const DeskScale& scale, std::uint64_t seed) {
    Experiment2Params params;
    params.curves = scale.curves;
    params.link = link;
    const auto filter = WaveletFilter::from_name("db4");
    const CoefficientLayout layout({"X"}, dyadic_levels(params.length));
    const auto family = level_family(layout);
    const DataGenerator generator = [&](std::uint64_t s) {
        const auto sim = experiment2(params, s);
        return wavelet_design(sim.panel, sim.outcome, filter).data;
    };
    return repeat_selection(generator, family, desk_selection_config(scale, seed), method);
}

AggregateReport run_experiment3(EliminationMethod method, const DeskScale& scale, std::uint64_t seed) {
    Experiment3Params params;
    params.curves = scale.curves;
    params.replicates = scale.replicates;
    const auto filter = WaveletFilter::from_name("db4");
    ShrinkageConfig shrink;
    shrink.sigma = params.sigma;
    const GroupedDataGenerator generator = [&](std::uint64_t s) {
        const auto sim = experiment3(params, s);
        auto design = wavelet_design(sim.panel, sim.outcome, filter, shrink);
        auto family = variable_family(design.layout);
        return GroupedData{std::move(design.data), std::move(family)};
    };
    return repeat_selection(generator, desk_selection_config(scale, seed), method);
}

TimeScan run_experiment1(int simulation, const DeskScale& scale, std::uint64_t seed) {
    if (simulation != 1 && simulation != 2) {
        throw InvalidInput("experiment 1 has simulations 1 and 2");
    }
    Experiment1Params params;
    params.curves = scale.curves;
    TimeScanConfig config;
    config.forest.num_trees = scale.trees;
    config.forest.mtry = scale.mtry;
    config.forest.min_leaf_size = scale.min_leaf_size;
    config.forest.threads = scale.threads;
    config.points = scale.scan_points;
    return time_importance_scan(
        [&](std::uint64_t s) { return simulation == 1 ? experiment1_sim1(params, s) : experiment1_sim2(params, s); },
        scale.scan_replicates, config, seed);
}

GroupVersusIndividual appendix_b_replicate(AppendixBCase which, std::size_t p, std::size_t n,
                                           const ForestConfig& forest, std::uint64_t seed) {
    const auto sim = appendix_b(which, p, n, derive_seed(seed, {0}));
    ForestConfig config = forest;
    config.seed = derive_seed(seed, {1});
    const Forest model = fit_forest(sim.data, config);

    ImportanceOptions opts;
    opts.seed = derive_seed(seed, {2});
    opts.threads = forest.threads;
    GroupVersusIndividual out;
    out.p = p;
    const auto grouped = grouped_importance(model, sim.data, sim.w_group, opts);
    out.grouped = grouped.raw;
    out.rescaled = grouped.rescaled;
    for (std::size_t j = 0; j < p; ++j) {
        opts.stream = 1 + j;
        out.sum_individual += individual_importance(model, sim.data, j, opts).raw;
    }
    return out;
}

std::vector<GroupVersusIndividual> run_appendix_b(AppendixBCase which, const std::vector<std::size_t>& sizes,
                                                  std::size_t replicates, std::size_t n, const ForestConfig& forest,
                                                  std::uint64_t seed) {
    std::vector<GroupVersusIndividual> out;
    for (const auto p : sizes) {
        for (std::size_t r = 0; r < replicates; ++r) {
            auto row = appendix_b_replicate(which, p, n, forest, derive_seed(seed, {p, r}));
            row.replicate = r;
            out.push_back(row);
        }
    }
    return out;
}

} // namespace wavesel
