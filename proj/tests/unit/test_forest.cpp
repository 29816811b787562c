#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wavesel/error.hpp"
#include "wavesel/forest.hpp"

using namespace wavesel;

namespace {

// Independent CART: every feature and every midpoint is tried and the child SSE is
// recomputed from scratch. Returns the prediction for one query.
struct RefNode {
    bool leaf = true;
    double value = 0.0;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::unique_ptr<RefNode> left;
    std::unique_ptr<RefNode> right;
};

double sse(const Dataset& d, const std::vector<std::size_t>& rows) {
    double m = 0.0;
    for (auto r : rows) {
        m += d.response()[r];
    }
    m /= static_cast<double>(rows.size());
    double s = 0.0;
    for (auto r : rows) {
        s += (d.response()[r] - m) * (d.response()[r] - m);
    }
    return s;
}

std::unique_ptr<RefNode> ref_build(const Dataset& d, const std::vector<std::size_t>& rows, std::size_t min_leaf) {
    auto node = std::make_unique<RefNode>();
    double m = 0.0;
    for (auto r : rows) {
        m += d.response()[r];
    }
    node->value = m / static_cast<double>(rows.size());
    bool pure = true;
    for (auto r : rows) {
        pure = pure && d.response()[r] == d.response()[rows.front()];
    }
    if (pure || rows.size() < 2 * min_leaf) {
        return node;
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_left;
    std::vector<std::size_t> best_right;
    for (std::size_t f = 0; f < d.cols(); ++f) {
        std::vector<double> xs;
        for (auto r : rows) {
            xs.push_back(d.at(r, f));
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            const double t = (xs[k] + xs[k + 1]) / 2.0;
            std::vector<std::size_t> l;
            std::vector<std::size_t> r;
            for (auto row : rows) {
                (d.at(row, f) <= t ? l : r).push_back(row);
            }
            if (l.size() < min_leaf || r.size() < min_leaf) {
                continue;
            }
            const double s = sse(d, l) + sse(d, r);
            if (s < best) {
                best = s;
                node->feature = f;
                node->threshold = t;
                best_left = l;
                best_right = r;
            }
        }
    }
    if (best_left.empty()) {
        return node;
    }
    node->leaf = false;
    node->left = ref_build(d, best_left, min_leaf);
    node->right = ref_build(d, best_right, min_leaf);
    return node;
}

double ref_predict(const RefNode& n, const std::vector<double>& x) {
    if (n.leaf) {
        return n.value;
    }
    return ref_predict(x[n.feature] <= n.threshold ? *n.left : *n.right, x);
}

Dataset random_dataset(std::size_t n, std::size_t p, std::uint64_t seed) {
    auto cols = test::normal_columns(n, p, seed);
    Rng rng(seed + 1);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = cols[0][i] + 0.5 * cols[1 % p][i] * cols[0][i] + 0.3 * rng.normal();
    }
    return Dataset::from_columns(cols, y, test::names(p));
}

std::vector<RowIndex> all_rows(std::size_t n) {
    std::vector<RowIndex> rows(n);
    std::iota(rows.begin(), rows.end(), RowIndex{0});
    return rows;
}

Tree leaf_tree(double value, std::vector<RowIndex> bootstrap, std::vector<RowIndex> oob) {
    return Tree({Tree::Node{-1, value, 0, 0}}, std::move(bootstrap), std::move(oob));
}

} // namespace

TEST(FitTree, ConstantResponseGivesSingleLeaf) {
    const auto d = Dataset::from_columns({{1, 2, 3, 4}, {5, 1, 2, 0}}, {2.5, 2.5, 2.5, 2.5}, {"a", "b"});
    Rng rng(1);
    const auto tree = fit_tree(d, all_rows(4), 2, rng);
    ASSERT_EQ(tree.nodes().size(), 1u);
    EXPECT_EQ(tree.nodes()[0].value, 2.5);
}

TEST(FitTree, StepFunctionNeedsOneSplit) {
    const auto d = Dataset::from_columns({{-1, 1, -1, 1, 1}}, {0, 1, 0, 1, 1}, {"x"});
    Rng rng(2);
    const auto tree = fit_tree(d, all_rows(5), 1, rng);
    EXPECT_EQ(tree.depth(), 1u);
    EXPECT_EQ(tree.leaf_count(), 2u);
    EXPECT_EQ(tree.nodes()[0].value, 0.0); // midpoint of -1 and 1
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(tree.predict_row(d, i), d.response()[i]);
    }
}

TEST(FitTree, SingleRowIsLeaf) {
    const auto d = Dataset::from_columns({{1, 2}}, {3, 4}, {"x"});
    Rng rng(3);
    const std::vector<RowIndex> rows{1};
    const auto tree = fit_tree(d, rows, 1, rng);
    ASSERT_EQ(tree.nodes().size(), 1u);
    EXPECT_EQ(tree.nodes()[0].value, 4.0);
    EXPECT_EQ(tree.oob(), (std::vector<RowIndex>{0}));
}

TEST(FitTree, RejectsEmptyRowsAndBadMtry) {
    const auto d = Dataset::from_columns({{1, 2}}, {3, 4}, {"x"});
    Rng rng(4);
    try {
        fit_tree(d, {}, 1, rng);
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_STREQ(e.what(), "empty training set");
    }
    EXPECT_THROW(fit_tree(d, all_rows(2), 0, rng), InvalidInput);
    EXPECT_THROW(fit_tree(d, all_rows(2), 2, rng), InvalidInput);
}

TEST(FitTree, TieBreaksOnLowestFeatureThenThreshold) {
    // Both features separate y perfectly, so the scores tie.
    const auto d = Dataset::from_columns({{0, 0, 1, 1}, {0, 0, 1, 1}}, {0, 0, 1, 1}, {"a", "b"});
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng(s);
        const auto tree = fit_tree(d, all_rows(4), 2, rng);
        EXPECT_EQ(tree.nodes()[0].feature, 0);
    }
    // Symmetric response: thresholds 0.5 and 2.5 tie; the lower one wins.
    const auto e = Dataset::from_columns({{0, 1, 2, 3}}, {1, 0, 0, 1}, {"x"});
    Rng rng(5);
    const auto tree = fit_tree(e, all_rows(4), 1, rng);
    EXPECT_EQ(tree.nodes()[0].value, 0.5);
}

TEST(FitTree, MatchesBruteForceReference) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto d = random_dataset(60, 4, 100 + seed);
        Rng pick(seed);
        std::vector<RowIndex> rows(60);
        for (auto& r : rows) {
            r = static_cast<RowIndex>(pick.index(60));
        }
        for (const std::size_t min_leaf : {1u, 3u}) {
            Rng rng(seed);
            const auto tree = fit_tree(d, rows, 4, rng, min_leaf);
            std::vector<std::size_t> ref_rows(rows.begin(), rows.end());
            const auto ref = ref_build(d, ref_rows, min_leaf);
            const auto queries = random_dataset(40, 4, 900 + seed);
            for (std::size_t i = 0; i < queries.rows(); ++i) {
                const auto x = queries.row(i);
                EXPECT_DOUBLE_EQ(tree.predict(x), ref_predict(*ref, x)) << "seed " << seed;
            }
        }
    }
}

TEST(FitTree, StructuralInvariants) {
    const auto d = random_dataset(80, 5, 7);
    Rng pick(8);
    std::vector<RowIndex> rows(80);
    for (auto& r : rows) {
        r = static_cast<RowIndex>(pick.index(80));
    }
    Rng rng(9);
    const auto tree = fit_tree(d, rows, 2, rng);
    const auto& nodes = tree.nodes();

    // Route training rows to nodes and check SSE decrease and leaf means.
    std::vector<std::vector<std::size_t>> members(nodes.size());
    for (const auto r : rows) {
        std::uint32_t i = 0;
        members[0].push_back(r);
        while (!nodes[i].is_leaf()) {
            i = d.at(r, nodes[i].feature) <= nodes[i].value ? nodes[i].left : nodes[i].right;
            members[i].push_back(r);
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        ASSERT_FALSE(members[i].empty()) << "node " << i << " is empty";
        if (nodes[i].is_leaf()) {
            double m = 0.0;
            for (auto r : members[i]) {
                m += d.response()[r];
            }
            EXPECT_NEAR(nodes[i].value, m / members[i].size(), 1e-12);
        } else {
            EXPECT_GE(sse(d, members[i]) + 1e-9, sse(d, members[nodes[i].left]) + sse(d, members[nodes[i].right]));
        }
    }
    // Distinct feature rows and min_leaf 1: zero training error.
    for (const auto r : rows) {
        EXPECT_NEAR(tree.predict_row(d, r), d.response()[r], 1e-12);
    }
}

TEST(FitForest, BootstrapAndOobBookkeeping) {
    const auto d = random_dataset(50, 3, 11);
    ForestConfig config;
    config.num_trees = 20;
    config.seed = 5;
    const auto forest = fit_forest(d, config);
    ASSERT_EQ(forest.trees().size(), 20u);
    for (const auto& t : forest.trees()) {
        EXPECT_EQ(t.bootstrap().size(), 50u);
        std::vector<RowIndex> distinct = t.bootstrap();
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<RowIndex> both;
        std::set_intersection(distinct.begin(), distinct.end(), t.oob().begin(), t.oob().end(),
                              std::back_inserter(both));
        EXPECT_TRUE(both.empty());
        EXPECT_EQ(distinct.size() + t.oob().size(), 50u);
    }
}

TEST(FitForest, SingleTreeForestEqualsTree) {
    const auto d = random_dataset(40, 3, 12);
    ForestConfig config;
    config.num_trees = 1;
    const auto forest = fit_forest(d, config);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        EXPECT_EQ(forest.predict_row(d, i), forest.trees()[0].predict_row(d, i));
    }
}

TEST(FitForest, DeterministicAcrossRunsAndThreads) {
    const auto d = random_dataset(120, 6, 13);
    ForestConfig config;
    config.num_trees = 30;
    config.seed = 77;
    const auto a = fit_forest(d, config).predict_all(d);
    const auto b = fit_forest(d, config).predict_all(d);
    config.threads = 4;
    const auto c = fit_forest(d, config).predict_all(d);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    config.seed = 78;
    EXPECT_NE(a, fit_forest(d, config).predict_all(d));
}

TEST(FitForest, ConstantResponsePredictsConstant) {
    const auto cols = test::normal_columns(30, 2, 14);
    const auto d = Dataset::from_columns(cols, std::vector<double>(30, -1.25), test::names(2));
    const auto forest = fit_forest(d, ForestConfig{});
    EXPECT_EQ(forest.predict(std::vector<double>{0.3, 9.0}), -1.25);
}

TEST(FitForest, RejectsBadConfig) {
    const auto d = random_dataset(10, 2, 15);
    ForestConfig config;
    config.mtry = 3;
    EXPECT_THROW(fit_forest(d, config), InvalidInput);
    config.mtry = 0;
    config.num_trees = 0;
    EXPECT_THROW(fit_forest(d, config), InvalidInput);
    EXPECT_EQ(ForestConfig{}.resolved_mtry(2), 1u);
    EXPECT_EQ(ForestConfig{}.resolved_mtry(10), 3u);
}

TEST(Forest, PredictionIsMeanOfTrees) {
    std::vector<Tree> trees;
    trees.push_back(leaf_tree(1.0, {0, 1}, {}));
    trees.push_back(leaf_tree(2.0, {0, 0}, {1}));
    const Forest forest(ForestConfig{}, 2, std::move(trees));
    EXPECT_EQ(forest.predict(std::vector<double>{0, 0}), 1.5);
    EXPECT_THROW(forest.predict(std::vector<double>{0}), InvalidInput);

    std::vector<Tree> same;
    same.push_back(leaf_tree(3.0, {0, 1}, {}));
    same.push_back(leaf_tree(3.0, {1, 1}, {0}));
    EXPECT_EQ(Forest(ForestConfig{}, 1, std::move(same)).predict(std::vector<double>{4}), 3.0);
}

TEST(Forest, ToyForestMatchesHandTrace) {
    // x = (0, 1, 2, 3), y = (0, 0, 10, 10). With one feature every non-pure bootstrap
    // sample is split between its largest 0-response x and smallest 10-response x.
    const auto d = Dataset::from_columns({{0, 1, 2, 3}}, {0, 0, 10, 10}, {"x"});
    ForestConfig config;
    config.num_trees = 2;
    config.seed = 2024;
    const auto forest = fit_forest(d, config);
    double expected = 0.0;
    for (const auto& t : forest.trees()) {
        const auto& b = t.bootstrap();
        const bool low = std::any_of(b.begin(), b.end(), [](RowIndex r) { return r < 2; });
        const bool high = std::any_of(b.begin(), b.end(), [](RowIndex r) { return r >= 2; });
        double pred = 0.0;
        if (low && high) {
            double max_low = -1;
            double min_high = 4;
            for (auto r : b) {
                if (r < 2) {
                    max_low = std::max(max_low, static_cast<double>(r));
                } else {
                    min_high = std::min(min_high, static_cast<double>(r));
                }
            }
            pred = 1.6 <= (max_low + min_high) / 2.0 ? 0.0 : 10.0;
        } else {
            pred = low ? 0.0 : 10.0;
        }
        expected += pred / 2.0;
    }
    EXPECT_EQ(forest.predict(std::vector<double>{1.6}), expected);
}

TEST(OobRisk, LeafTreeOnKnownResponses) {
    const auto d = Dataset::from_columns({{0, 0, 0}}, {5, 1, -1}, {"x"});
    const auto tree = leaf_tree(0.0, {0, 0, 0}, {1, 2});
    EXPECT_EQ(oob_risk(tree, d).value(), 1.0);
}

TEST(OobRisk, EmptyOobSignalsNoRows) {
    const auto d = Dataset::from_columns({{0, 1}}, {1, 2}, {"x"});
    const auto tree = leaf_tree(0.0, {0, 1}, {});
    EXPECT_FALSE(oob_risk(tree, d).has_value());
}

TEST(OobRisk, MatchesDirectRecomputation) {
    const auto d = random_dataset(70, 3, 16);
    ForestConfig config;
    config.num_trees = 5;
    const auto forest = fit_forest(d, config);
    for (const auto& t : forest.trees()) {
        double s = 0.0;
        for (const auto r : t.oob()) {
            const double e = d.response()[r] - t.predict(d.row(r));
            s += e * e;
        }
        EXPECT_NEAR(oob_risk(t, d).value(), s / t.oob().size(), 1e-12);
    }
}

TEST(OobRisk, PermutedBlockReadsSourceRows) {
    const auto d = random_dataset(60, 3, 17);
    ForestConfig config;
    config.num_trees = 3;
    const auto forest = fit_forest(d, config);
    const auto& t = forest.trees()[0];
    const auto& oob = t.oob();
    std::vector<RowIndex> source(oob.rbegin(), oob.rend());
    const std::vector<std::size_t> cols{0, 2};
    double s = 0.0;
    for (std::size_t p = 0; p < oob.size(); ++p) {
        auto x = d.row(oob[p]);
        x[0] = d.at(source[p], 0);
        x[2] = d.at(source[p], 2);
        const double e = d.response()[oob[p]] - t.predict(x);
        s += e * e;
    }
    const auto risk = oob_risk(t, d, PermutedBlock{cols, source});
    EXPECT_NEAR(risk.value(), s / oob.size(), 1e-12);
}
