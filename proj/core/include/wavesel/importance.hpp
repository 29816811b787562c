#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/forest.hpp"
#include "wavesel/groups.hpp"

namespace wavesel {

/// Out-of-bag permutation importance of a column or group of columns.
struct ImportanceReport {
    std::string target;
    /// |J|, the number of permuted columns.
    std::size_t size = 0;
    /// Mean over trees of [risk(permuted OOB) - risk(OOB)].
    double raw = 0.0;
    /// raw / |J|.
    double rescaled = 0.0;
    /// Increment of every tree that has OOB rows, in tree order.
    std::vector<double> per_tree;
    std::size_t trees_used = 0;
    /// Trees with an empty OOB sample; they are excluded from the mean.
    std::size_t trees_skipped = 0;
};

struct ImportanceOptions {
    std::uint64_t seed = 0;
    /// Distinguishes independent permutation streams (importance_table uses the group index).
    std::uint64_t stream = 0;
    /// Permutations averaged per tree.
    std::size_t repeats = 1;
    unsigned threads = 1;
};

/// Supplies the permutation applied to a tree's OOB sample: element p is the OOB position
/// whose values replace those of OOB position p. Must return a permutation of 0..oob_size-1.
using PermutationSource =
    std::function<std::vector<RowIndex>(std::size_t tree, std::size_t repeat, std::size_t oob_size)>;

/// Uniform permutations drawn from derive_seed(seed, {stream, tree, repeat}).
PermutationSource uniform_permutations(std::uint64_t seed, std::uint64_t stream);

/// Grouped importance with a caller-supplied permutation source. One permutation per tree
/// (and repeat) is applied jointly to every column of the group.
ImportanceReport grouped_importance(const Forest& forest, const Dataset& data, const Group& group,
                                    const PermutationSource& permutations, std::size_t repeats = 1,
                                    unsigned threads = 1);

/// Grouped importance of the columns in `group`. Throws InvalidInput for an empty group,
/// duplicate or out-of-range columns, and when no tree has OOB rows.
ImportanceReport grouped_importance(const Forest& forest, const Dataset& data, const Group& group,
                                    const ImportanceOptions& options = {});

/// Importance of a single column; identical to grouped_importance of {column} with the same options.
ImportanceReport individual_importance(const Forest& forest, const Dataset& data, std::size_t column,
                                       const ImportanceOptions& options = {});

/// grouped_importance of every group of the family. Group g uses stream options.stream + g.
std::vector<ImportanceReport> importance_table(const Forest& forest, const Dataset& data, const GroupFamily& family,
                                               const ImportanceOptions& options = {});

} // namespace wavesel
