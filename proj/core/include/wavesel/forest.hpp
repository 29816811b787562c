#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

struct ForestConfig {
    std::size_t num_trees = 100;
    /// Features sampled per split; 0 selects max(1, floor(P / 3)).
    std::size_t mtry = 0;
    std::size_t min_leaf_size = 1;
    std::uint64_t seed = 0;
    /// Worker threads for fitting (0 = hardware concurrency). Never changes the result.
    unsigned threads = 1;

    /// mtry actually used for P features; throws InvalidInput when out of [1, P].
    std::size_t resolved_mtry(std::size_t num_features) const;
};

/// Unpruned CART regression tree plus the bootstrap / out-of-bag bookkeeping of its
/// training sample.
class Tree {
public:
    struct Node {
        /// Split feature, or -1 for a leaf.
        std::int32_t feature = -1;
        /// Split threshold (go left when x <= threshold) or leaf prediction.
        double value = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;

        bool is_leaf() const { return feature < 0; }
    };

    Tree() = default;

    /// Reassembles a tree from stored parts. Throws InvalidInput when the node arena is
    /// not a well-formed binary tree rooted at node 0.
    Tree(std::vector<Node> nodes, std::vector<RowIndex> bootstrap, std::vector<RowIndex> oob);

    template <class FeatureFn>
    double predict_with(FeatureFn&& feature) const {
        std::uint32_t i = 0;
        while (!nodes_[i].is_leaf()) {
            const auto& node = nodes_[i];
            i = feature(static_cast<std::size_t>(node.feature)) <= node.value ? node.left : node.right;
        }
        return nodes_[i].value;
    }

    double predict(std::span<const double> x) const;
    double predict_row(const Dataset& data, std::size_t row) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    /// Training rows with multiplicity, sorted.
    const std::vector<RowIndex>& bootstrap() const { return bootstrap_; }
    /// Rows of the dataset never drawn into the training sample, sorted.
    const std::vector<RowIndex>& oob() const { return oob_; }

    std::size_t depth() const;
    std::size_t leaf_count() const;

private:
    friend Tree fit_tree(const Dataset&, std::span<const RowIndex>, std::size_t, Rng&, std::size_t);

    std::vector<Node> nodes_;
    std::vector<RowIndex> bootstrap_;
    std::vector<RowIndex> oob_;
};

/// Grows a regression tree on `rows` (a multiset of row indices of `data`).
///
/// At each node up to `mtry` non-constant features are examined in random order and the
/// split with the largest decrease in sum of squared errors is taken; ties go to the
/// lowest feature index, then the lowest threshold. Thresholds are midpoints between
/// consecutive distinct values. Growth stops at pure nodes, nodes with fewer than
/// 2 * min_leaf_size rows, and nodes where every feature is constant.
Tree fit_tree(const Dataset& data, std::span<const RowIndex> rows, std::size_t mtry, Rng& rng,
              std::size_t min_leaf_size = 1);

/// Bagged ensemble of regression trees. Prediction is the mean of the tree predictions.
class Forest {
public:
    Forest() = default;
    Forest(ForestConfig config, std::size_t num_features, std::vector<Tree> trees);

    double predict(std::span<const double> x) const;
    double predict_row(const Dataset& data, std::size_t row) const;
    std::vector<double> predict_all(const Dataset& data) const;

    const std::vector<Tree>& trees() const { return trees_; }
    const ForestConfig& config() const { return config_; }
    std::size_t num_features() const { return num_features_; }

private:
    ForestConfig config_;
    std::size_t num_features_ = 0;
    std::vector<Tree> trees_;
};

/// Fits config.num_trees trees, each on its own n-draw bootstrap. Tree m draws from the
/// stream derive_seed(config.seed, {m}), so the forest is a pure function of (data, config).
Forest fit_forest(const Dataset& data, const ForestConfig& config);

/// Joint replacement of a block of feature columns on the OOB rows of a tree. The OOB row
/// at position p of tree.oob() reads the block columns from row source_rows[p].
struct PermutedBlock {
    std::span<const std::size_t> columns;
    std::span<const RowIndex> source_rows;
};

/// Mean squared error of `tree` over its OOB rows, optionally with a permuted block.
/// Returns nullopt when the tree has no OOB rows.
std::optional<double> oob_risk(const Tree& tree, const Dataset& data,
                               const std::optional<PermutedBlock>& block = std::nullopt);

/// Mean squared error of the forest on every row of `data`.
double mean_squared_error(const Forest& forest, const Dataset& data);

} // namespace wavesel
