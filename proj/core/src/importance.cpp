#include "wavesel/importance.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_set>

#include "wavesel/error.hpp"
#include "wavesel/parallel.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

namespace {

void check_group(const Group& group, const Dataset& data, const Forest& forest) {
    if (group.columns.empty()) {
        throw InvalidInput("importance requested for an empty group");
    }
    if (forest.num_features() != data.cols()) {
        throw InvalidInput("forest was fitted on " + std::to_string(forest.num_features()) +
                           " features but the dataset has " + std::to_string(data.cols()));
    }
    std::unordered_set<std::size_t> seen;
    for (const auto c : group.columns) {
        if (c >= data.cols()) {
            throw InvalidInput("group '" + group.label + "' refers to a column outside the dataset");
        }
        if (!seen.insert(c).second) {
            throw InvalidInput("group '" + group.label + "' contains duplicate column " + std::to_string(c));
        }
    }
}

void check_permutation(const std::vector<RowIndex>& perm, std::size_t size) {
    if (perm.size() != size) {
        throw InvalidInput("permutation source returned the wrong length");
    }
    std::vector<char> hit(size, 0);
    for (const auto p : perm) {
        if (p >= size || hit[p]) {
            throw InvalidInput("permutation source returned a non-permutation");
        }
        hit[p] = 1;
    }
}

std::vector<std::optional<double>> baseline_risks(const Forest& forest, const Dataset& data, unsigned threads) {
    std::vector<std::optional<double>> risks(forest.trees().size());
    parallel_for(risks.size(), threads, [&](std::size_t m) { risks[m] = oob_risk(forest.trees()[m], data); });
    return risks;
}

ImportanceReport compute(const Forest& forest, const Dataset& data, const Group& group,
                         const std::vector<std::optional<double>>& baseline, const PermutationSource& permutations,
                         std::size_t repeats, unsigned threads) {
    check_group(group, data, forest);
    if (repeats == 0) {
        throw InvalidInput("repeats must be at least 1");
    }
    const auto& trees = forest.trees();
    std::vector<std::optional<double>> increments(trees.size());
    parallel_for(trees.size(), threads, [&](std::size_t m) {
        if (!baseline[m]) {
            return;
        }
        const auto& oob = trees[m].oob();
        std::vector<RowIndex> sources(oob.size());
        double permuted = 0.0;
        for (std::size_t r = 0; r < repeats; ++r) {
            const auto perm = permutations(m, r, oob.size());
            check_permutation(perm, oob.size());
            for (std::size_t p = 0; p < oob.size(); ++p) {
                sources[p] = oob[perm[p]];
            }
            permuted += *oob_risk(trees[m], data, PermutedBlock{group.columns, sources});
        }
        increments[m] = permuted / static_cast<double>(repeats) - *baseline[m];
    });

    ImportanceReport report;
    report.target = group.label;
    report.size = group.columns.size();
    for (const auto& inc : increments) {
        if (inc) {
            report.per_tree.push_back(*inc);
        } else {
            ++report.trees_skipped;
        }
    }
    report.trees_used = report.per_tree.size();
    if (report.trees_used == 0) {
        throw InvalidInput("no tree has out-of-bag rows; importance is undefined");
    }
    report.raw = std::accumulate(report.per_tree.begin(), report.per_tree.end(), 0.0) /
                 static_cast<double>(report.trees_used);
    report.rescaled = report.raw / static_cast<double>(report.size);
    return report;
}

} // namespace

PermutationSource uniform_permutations(std::uint64_t seed, std::uint64_t stream) {
    return [seed, stream](std::size_t tree, std::size_t repeat, std::size_t oob_size) {
        Rng rng(derive_seed(seed, {stream, tree, repeat}));
        std::vector<RowIndex> perm(oob_size);
        std::iota(perm.begin(), perm.end(), RowIndex{0});
        rng.shuffle(std::span(perm));
        return perm;
    };
}

ImportanceReport grouped_importance(const Forest& forest, const Dataset& data, const Group& group,
                                    const PermutationSource& permutations, std::size_t repeats, unsigned threads) {
    check_group(group, data, forest);
    return compute(forest, data, group, baseline_risks(forest, data, threads), permutations, repeats, threads);
}

ImportanceReport grouped_importance(const Forest& forest, const Dataset& data, const Group& group,
                                    const ImportanceOptions& options) {
    return grouped_importance(forest, data, group, uniform_permutations(options.seed, options.stream),
                              options.repeats, options.threads);
}

ImportanceReport individual_importance(const Forest& forest, const Dataset& data, std::size_t column,
                                       const ImportanceOptions& options) {
    if (column >= data.cols()) {
        throw InvalidInput("column index " + std::to_string(column) + " out of range");
    }
    return grouped_importance(forest, data, Group{data.name(column), {column}}, options);
}

std::vector<ImportanceReport> importance_table(const Forest& forest, const Dataset& data, const GroupFamily& family,
                                               const ImportanceOptions& options) {
    for (const auto& g : family.groups) {
        check_group(g, data, forest);
    }
    const auto baseline = baseline_risks(forest, data, options.threads);
    std::vector<ImportanceReport> reports;
    reports.reserve(family.groups.size());
    for (std::size_t g = 0; g < family.groups.size(); ++g) {
        reports.push_back(compute(forest, data, family.groups[g], baseline,
                                  uniform_permutations(options.seed, options.stream + g), options.repeats,
                                  options.threads));
    }
    return reports;
}

} // namespace wavesel
