#include "wavesel/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "wavesel/error.hpp"
#include "wavesel/parallel.hpp"

namespace wavesel {

std::size_t ForestConfig::resolved_mtry(std::size_t num_features) const {
    if (num_features == 0) {
        throw InvalidInput("forest needs at least one feature");
    }
    const std::size_t m = mtry == 0 ? std::max<std::size_t>(1, num_features / 3) : mtry;
    if (m > num_features) {
        throw InvalidInput("mtry " + std::to_string(m) + " exceeds the number of features " +
                           std::to_string(num_features));
    }
    return m;
}

Tree::Tree(std::vector<Node> nodes, std::vector<RowIndex> bootstrap, std::vector<RowIndex> oob)
    : nodes_(std::move(nodes)), bootstrap_(std::move(bootstrap)), oob_(std::move(oob)) {
    if (nodes_.empty()) {
        throw InvalidInput("tree has no nodes");
    }
    // Every non-root node must be referenced exactly once, by a parent with a lower index.
    std::vector<int> parents(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.is_leaf()) {
            continue;
        }
        if (n.left >= nodes_.size() || n.right >= nodes_.size() || n.left <= i || n.right <= i ||
            n.left == n.right) {
            throw InvalidInput("tree node " + std::to_string(i) + " has invalid children");
        }
        ++parents[n.left];
        ++parents[n.right];
    }
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (parents[i] != 1) {
            throw InvalidInput("tree node " + std::to_string(i) + " is not reachable exactly once");
        }
    }
    std::sort(bootstrap_.begin(), bootstrap_.end());
    std::sort(oob_.begin(), oob_.end());
}

double Tree::predict(std::span<const double> x) const {
    return predict_with([&](std::size_t f) { return x[f]; });
}

double Tree::predict_row(const Dataset& data, std::size_t row) const {
    return predict_with([&](std::size_t f) { return data.at(row, f); });
}

std::size_t Tree::depth() const {
    std::vector<std::size_t> level(nodes_.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes_[i].is_leaf()) {
            level[nodes_[i].left] = level[i] + 1;
            level[nodes_[i].right] = level[i] + 1;
        }
    }
    return deepest;
}

std::size_t Tree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

namespace {

struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = -std::numeric_limits<double>::infinity();
    bool found = false;
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, std::size_t mtry, std::size_t min_leaf, Rng& rng)
        : data_(data), response_(data.response()), mtry_(mtry), min_leaf_(min_leaf), rng_(rng),
          features_(data.cols()) {
        std::iota(features_.begin(), features_.end(), std::size_t{0});
    }

    std::vector<Tree::Node> build(std::vector<RowIndex> rows) {
        rows_ = std::move(rows);
        pairs_.resize(rows_.size());
        nodes_.clear();
        nodes_.emplace_back();

        struct Pending {
            std::uint32_t node;
            std::size_t begin;
            std::size_t end;
        };
        std::vector<Pending> stack{{0, 0, rows_.size()}};
        while (!stack.empty()) {
            const auto item = stack.back();
            stack.pop_back();
            const auto span = std::span<RowIndex>(rows_).subspan(item.begin, item.end - item.begin);

            double sum = 0.0;
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (const auto r : span) {
                const double y = response_[r];
                sum += y;
                lo = std::min(lo, y);
                hi = std::max(hi, y);
            }
            const double mean = sum / static_cast<double>(span.size());

            Split split;
            if (lo != hi && span.size() >= 2 * min_leaf_) {
                split = find_split(span, mean);
            }
            if (!split.found) {
                nodes_[item.node].feature = -1;
                nodes_[item.node].value = mean;
                continue;
            }

            const auto column = data_.column(split.feature);
            const auto middle = std::partition(span.begin(), span.end(),
                                               [&](RowIndex r) { return column[r] <= split.threshold; });
            const auto left_size = static_cast<std::size_t>(middle - span.begin());

            const auto left = static_cast<std::uint32_t>(nodes_.size());
            const auto right = left + 1;
            nodes_.emplace_back();
            nodes_.emplace_back();
            auto& node = nodes_[item.node];
            node.feature = static_cast<std::int32_t>(split.feature);
            node.value = split.threshold;
            node.left = left;
            node.right = right;
            // Right pushed first so the left subtree is expanded first.
            stack.push_back({right, item.begin + left_size, item.end});
            stack.push_back({left, item.begin, item.begin + left_size});
        }
        return std::move(nodes_);
    }

private:
    Split find_split(std::span<const RowIndex> rows, double mean) {
        Split best;
        const std::size_t m = rows.size();
        const std::size_t p = features_.size();
        std::size_t evaluated = 0;
        for (std::size_t i = 0; i < p && evaluated < mtry_; ++i) {
            std::swap(features_[i], features_[i + static_cast<std::size_t>(rng_.index(p - i))]);
            const std::size_t f = features_[i];
            const auto column = data_.column(f);

            auto pairs = std::span(pairs_).first(m);
            for (std::size_t k = 0; k < m; ++k) {
                pairs[k] = {column[rows[k]], response_[rows[k]] - mean};
            }
            std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            if (pairs.front().first == pairs.back().first) {
                continue;
            }
            ++evaluated;

            double total = 0.0;
            for (const auto& pr : pairs) {
                total += pr.second;
            }
            double left_sum = 0.0;
            for (std::size_t k = 0; k + 1 < m; ++k) {
                left_sum += pairs[k].second;
                if (pairs[k].first == pairs[k + 1].first) {
                    continue;
                }
                const std::size_t n_left = k + 1;
                const std::size_t n_right = m - n_left;
                if (n_left < min_leaf_ || n_right < min_leaf_) {
                    continue;
                }
                const double right_sum = total - left_sum;
                const double score = left_sum * left_sum / static_cast<double>(n_left) +
                                     right_sum * right_sum / static_cast<double>(n_right);
                // Identical partitions reached through different features accumulate in a
                // different order, so near-equal scores count as ties.
                const double slack = 1e-12 * std::abs(best.score);
                const bool better =
                    !best.found || score > best.score + slack || (score >= best.score - slack && f < best.feature);
                if (better) {
                    const double a = pairs[k].first;
                    const double b = pairs[k + 1].first;
                    double threshold = a + (b - a) / 2.0;
                    if (!(threshold >= a && threshold < b)) {
                        threshold = a;
                    }
                    best = {f, threshold, score, true};
                }
            }
        }
        return best;
    }

    const Dataset& data_;
    std::span<const double> response_;
    std::size_t mtry_;
    std::size_t min_leaf_;
    Rng& rng_;
    std::vector<std::size_t> features_;
    std::vector<RowIndex> rows_;
    std::vector<std::pair<double, double>> pairs_;
    std::vector<Tree::Node> nodes_;
};

} // namespace

Tree fit_tree(const Dataset& data, std::span<const RowIndex> rows, std::size_t mtry, Rng& rng,
              std::size_t min_leaf_size) {
    if (rows.empty()) {
        throw InvalidInput("empty training set");
    }
    if (mtry == 0 || mtry > data.cols()) {
        throw InvalidInput("mtry must lie in [1, " + std::to_string(data.cols()) + "]");
    }
    if (min_leaf_size == 0) {
        throw InvalidInput("min_leaf_size must be positive");
    }
    std::vector<char> drawn(data.rows(), 0);
    for (const auto r : rows) {
        if (r >= data.rows()) {
            throw InvalidInput("training row index out of range");
        }
        drawn[r] = 1;
    }

    TreeBuilder builder(data, mtry, min_leaf_size, rng);
    Tree tree;
    tree.nodes_ = builder.build(std::vector<RowIndex>(rows.begin(), rows.end()));
    tree.bootstrap_.assign(rows.begin(), rows.end());
    std::sort(tree.bootstrap_.begin(), tree.bootstrap_.end());
    for (std::size_t r = 0; r < data.rows(); ++r) {
        if (!drawn[r]) {
            tree.oob_.push_back(static_cast<RowIndex>(r));
        }
    }
    return tree;
}

Forest::Forest(ForestConfig config, std::size_t num_features, std::vector<Tree> trees)
    : config_(config), num_features_(num_features), trees_(std::move(trees)) {
    if (trees_.empty()) {
        throw InvalidInput("forest needs at least one tree");
    }
    for (const auto& tree : trees_) {
        for (const auto& node : tree.nodes()) {
            if (!node.is_leaf() && static_cast<std::size_t>(node.feature) >= num_features_) {
                throw InvalidInput("tree refers to feature outside the forest's feature count");
            }
        }
    }
}

double Forest::predict(std::span<const double> x) const {
    if (x.size() != num_features_) {
        throw InvalidInput("query has " + std::to_string(x.size()) + " coordinates, forest expects " +
                           std::to_string(num_features_));
    }
    double sum = 0.0;
    for (const auto& tree : trees_) {
        sum += tree.predict(x);
    }
    return sum / static_cast<double>(trees_.size());
}

double Forest::predict_row(const Dataset& data, std::size_t row) const {
    if (data.cols() != num_features_) {
        throw InvalidInput("dataset has " + std::to_string(data.cols()) + " columns, forest expects " +
                           std::to_string(num_features_));
    }
    double sum = 0.0;
    for (const auto& tree : trees_) {
        sum += tree.predict_row(data, row);
    }
    return sum / static_cast<double>(trees_.size());
}

std::vector<double> Forest::predict_all(const Dataset& data) const {
    std::vector<double> out(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) {
        out[i] = predict_row(data, i);
    }
    return out;
}

Forest fit_forest(const Dataset& data, const ForestConfig& config) {
    if (config.num_trees == 0) {
        throw InvalidInput("num_trees must be at least 1");
    }
    if (config.min_leaf_size == 0) {
        throw InvalidInput("min_leaf_size must be positive");
    }
    if (data.rows() < 2) {
        throw InvalidInput("forest needs at least 2 rows");
    }
    const std::size_t mtry = config.resolved_mtry(data.cols());
    const std::size_t n = data.rows();

    std::vector<Tree> trees(config.num_trees);
    parallel_for(config.num_trees, config.threads, [&](std::size_t m) {
        Rng rng(derive_seed(config.seed, {m}));
        std::vector<RowIndex> rows(n);
        for (auto& r : rows) {
            r = static_cast<RowIndex>(rng.index(n));
        }
        trees[m] = fit_tree(data, rows, mtry, rng, config.min_leaf_size);
    });
    return Forest(config, data.cols(), std::move(trees));
}

std::optional<double> oob_risk(const Tree& tree, const Dataset& data, const std::optional<PermutedBlock>& block) {
    const auto& oob = tree.oob();
    if (oob.empty()) {
        return std::nullopt;
    }
    const auto y = data.response();
    double sse = 0.0;
    if (!block) {
        for (const auto r : oob) {
            const double e = y[r] - tree.predict_row(data, r);
            sse += e * e;
        }
    } else {
        if (block->source_rows.size() != oob.size()) {
            throw InvalidInput("permutation length differs from the number of OOB rows");
        }
        std::vector<char> in_block(data.cols(), 0);
        for (const auto c : block->columns) {
            if (c >= data.cols()) {
                throw InvalidInput("permuted column out of range");
            }
            in_block[c] = 1;
        }
        for (std::size_t p = 0; p < oob.size(); ++p) {
            const std::size_t r = oob[p];
            const std::size_t s = block->source_rows[p];
            const double pred =
                tree.predict_with([&](std::size_t f) { return data.at(in_block[f] ? s : r, f); });
            const double e = y[r] - pred;
            sse += e * e;
        }
    }
    return sse / static_cast<double>(oob.size());
}

double mean_squared_error(const Forest& forest, const Dataset& data) {
    const auto y = data.response();
    double sse = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        const double e = y[i] - forest.predict_row(data, i);
        sse += e * e;
    }
    return sse / static_cast<double>(data.rows());
}

} // namespace wavesel
