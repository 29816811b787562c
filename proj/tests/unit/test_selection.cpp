#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wavesel/error.hpp"
#include "wavesel/selection.hpp"

using namespace wavesel;

namespace {

// Two signal groups of two columns each and three noise groups.
Dataset signal_data(std::size_t n, std::uint64_t seed) {
    auto cols = test::normal_columns(n, 8, seed);
    Rng rng(seed + 99);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = 2.0 * cols[0][i] + cols[1][i] + 1.5 * cols[2][i] + 0.2 * rng.normal();
    }
    return Dataset::from_columns(cols, y, test::names(8));
}

GroupFamily signal_family() {
    return GroupFamily{{{"s1", {0, 1}}, {"s2", {2, 3}}, {"n1", {4, 5}}, {"n2", {6}}, {"n3", {7}}}, true};
}

SelectionConfig small_config() {
    SelectionConfig c;
    c.forest.num_trees = 30;
    c.seed = 3;
    return c;
}

} // namespace

TEST(SplitRows, SizesAndDisjointness) {
    const auto s = split_rows(100, 0.9, 1);
    EXPECT_EQ(s.train.size(), 90u);
    EXPECT_EQ(s.validation.size(), 10u);
    EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
    EXPECT_TRUE(std::is_sorted(s.validation.begin(), s.validation.end()));
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.validation.begin(), s.validation.end());
    EXPECT_EQ(all.size(), 100u);
    EXPECT_EQ(split_rows(100, 0.9, 1).train, s.train);
    EXPECT_NE(split_rows(100, 0.9, 2).train, s.train);
    EXPECT_EQ(split_rows(3, 0.99, 1).validation.size(), 1u);
    EXPECT_EQ(split_rows(10, 0.01, 1).train.size(), 2u);
    EXPECT_THROW(split_rows(2, 0.5, 1), InvalidInput);
    EXPECT_THROW(split_rows(10, 1.0, 1), InvalidInput);
}

TEST(Rfe, TraceStructure) {
    const auto d = signal_data(200, 1);
    const auto family = signal_family();
    const auto trace = rfe_select(d, family, small_config());
    ASSERT_EQ(trace.steps.size(), 5u);
    EXPECT_EQ(trace.labels[2], "n1");
    std::set<std::size_t> eliminated;
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const auto& step = trace.steps[s];
        EXPECT_EQ(step.active.size(), 5 - s);
        ASSERT_EQ(step.importances.size(), step.active.size());
        EXPECT_TRUE(std::is_sorted(step.active.begin(), step.active.end()));
        EXPECT_TRUE(std::binary_search(step.active.begin(), step.active.end(), step.eliminated));
        EXPECT_TRUE(eliminated.insert(step.eliminated).second);
        // Eliminated group has the smallest rescaled importance.
        const auto pos = static_cast<std::size_t>(
            std::find(step.active.begin(), step.active.end(), step.eliminated) - step.active.begin());
        for (const auto& r : step.importances) {
            EXPECT_LE(step.importances[pos].rescaled, r.rescaled);
        }
        EXPECT_EQ(step.importances[pos].target, family.groups[step.eliminated].label);
        if (s + 1 < trace.steps.size()) {
            auto next = step.active;
            next.erase(std::find(next.begin(), next.end(), step.eliminated));
            EXPECT_EQ(trace.steps[s + 1].active, next);
        }
    }
    // Signal groups survive the noise groups.
    EXPECT_EQ(std::set<std::size_t>({trace.steps[3].eliminated, trace.steps[4].eliminated}),
              (std::set<std::size_t>{0, 1}));
    std::size_t best = 0;
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        if (trace.steps[s].validation_mse <= trace.steps[best].validation_mse) {
            best = s;
        }
    }
    EXPECT_EQ(trace.chosen_step, best);
    EXPECT_EQ(choose_model(trace), trace.steps[best].active);
}

TEST(Rfe, RawRankingUsesRawImportance) {
    const auto d = signal_data(150, 2);
    auto config = small_config();
    config.use_rescaled = false;
    const auto trace = rfe_select(d, signal_family(), config);
    const auto& step = trace.steps.front();
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& r : step.importances) {
        lowest = std::min(lowest, r.raw);
    }
    const auto pos = std::find(step.active.begin(), step.active.end(), step.eliminated) - step.active.begin();
    EXPECT_EQ(step.importances[static_cast<std::size_t>(pos)].raw, lowest);
}

TEST(Rfe, TiesEliminateLargerGroupThenLabel) {
    // Constant response: every importance is exactly zero.
    const auto cols = test::normal_columns(40, 4, 5);
    const auto d = Dataset::from_columns(cols, std::vector<double>(40, 1.0), test::names(4));
    const GroupFamily family{{{"b", {0}}, {"a", {1}}, {"big", {2, 3}}}, true};
    const auto trace = rfe_select(d, family, small_config());
    EXPECT_EQ(trace.steps[0].eliminated, 2u);
    EXPECT_EQ(trace.steps[1].eliminated, 1u);
    EXPECT_EQ(trace.steps[2].eliminated, 0u);
    // Equal MSE everywhere: the latest step wins.
    EXPECT_EQ(trace.chosen_step, 2u);
}

TEST(Rfe, RejectsOverlappingFamilies) {
    const auto d = signal_data(60, 3);
    try {
        rfe_select(d, GroupFamily{{{"a", {0, 1}}, {"b", {1, 2}}}, false}, small_config());
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_STREQ(e.what(), "RFE requires a partition");
    }
    EXPECT_THROW(rfe_select(d, GroupFamily{}, small_config()), InvalidInput);
    auto config = small_config();
    config.runs = 0;
    EXPECT_THROW(rfe_select(d, signal_family(), config), InvalidInput);
}

TEST(Rfe, DeterministicAndThreadInvariant) {
    const auto d = signal_data(120, 4);
    auto config = small_config();
    const auto a = rfe_select(d, signal_family(), config);
    config.forest.threads = 3;
    const auto b = rfe_select(d, signal_family(), config);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    for (std::size_t s = 0; s < a.steps.size(); ++s) {
        EXPECT_EQ(a.steps[s].validation_mse, b.steps[s].validation_mse);
        EXPECT_EQ(a.steps[s].eliminated, b.steps[s].eliminated);
    }
}

TEST(Nrfe, EliminatesInFirstStepOrder) {
    const auto d = signal_data(150, 6);
    const auto config = small_config();
    const auto trace = nrfe_select(d, signal_family(), config);
    ASSERT_EQ(trace.steps.size(), 5u);
    const auto& first = trace.steps.front();
    ASSERT_EQ(first.importances.size(), 5u);
    std::vector<std::size_t> order(5);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return first.importances[a].rescaled < first.importances[b].rescaled;
    });
    for (std::size_t s = 0; s < 5; ++s) {
        EXPECT_EQ(trace.steps[s].eliminated, first.active[order[s]]);
        if (s > 0) {
            EXPECT_TRUE(trace.steps[s].importances.empty());
        }
    }
    // The first step is the same full model as RFE's.
    const auto rfe = rfe_select(d, signal_family(), config);
    EXPECT_EQ(rfe.steps[0].validation_mse, first.validation_mse);
    EXPECT_EQ(rfe.steps[0].eliminated, first.eliminated);
    EXPECT_EQ(to_string(trace.method), "nrfe");
}

TEST(RepeatSelection, AggregatesTraces) {
    auto config = small_config();
    config.runs = 3;
    const DataGenerator gen = [](std::uint64_t seed) { return signal_data(100, seed); };
    const auto report = repeat_selection(gen, signal_family(), config, EliminationMethod::recursive);
    ASSERT_EQ(report.traces.size(), 3u);
    EXPECT_EQ(report.group_sizes, (std::vector<std::size_t>{2, 2, 2, 1, 1}));
    std::vector<std::size_t> counts(5, 0);
    std::vector<double> mse(5, 0.0);
    for (std::size_t r = 0; r < 3; ++r) {
        const auto& t = report.traces[r];
        for (const auto g : choose_model(t)) {
            ++counts[g];
        }
        EXPECT_EQ(report.run_chosen_sizes[r], choose_model(t).size());
        for (const auto& s : t.steps) {
            mse[s.active.size() - 1] += s.validation_mse / 3.0;
        }
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_EQ(report.step1_raw[t.steps[0].active[i]][r], t.steps[0].importances[i].raw);
        }
    }
    EXPECT_EQ(report.selection_count, counts);
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_NEAR(report.mean_mse[k], mse[k], 1e-12);
    }
    const auto best = std::min_element(report.mean_mse.begin(), report.mean_mse.end()) - report.mean_mse.begin();
    EXPECT_EQ(report.chosen_size, static_cast<std::size_t>(best) + 1);
    EXPECT_EQ(report.frequency(0), 1.0);
    EXPECT_EQ(report.frequency(1), 1.0);
}

TEST(RepeatSelection, FixedDataVariesSplit) {
    auto config = small_config();
    config.runs = 2;
    const auto d = signal_data(80, 7);
    const auto report = repeat_selection(d, signal_family(), config, EliminationMethod::non_recursive);
    ASSERT_EQ(report.traces.size(), 2u);
    EXPECT_NE(report.traces[0].steps[0].validation_mse, report.traces[1].steps[0].validation_mse);
    const auto again = repeat_selection(d, signal_family(), config, EliminationMethod::non_recursive);
    EXPECT_EQ(again.mean_mse, report.mean_mse);
}

TEST(RepeatSelection, GroupedGeneratorChecksLabels) {
    auto config = small_config();
    config.runs = 2;
    const GroupedDataGenerator ok = [](std::uint64_t seed) {
        return GroupedData{signal_data(60, seed), signal_family()};
    };
    EXPECT_EQ(repeat_selection(ok, config, EliminationMethod::recursive).traces.size(), 2u);
    int calls = 0;
    const GroupedDataGenerator bad = [&calls](std::uint64_t seed) {
        auto family = signal_family();
        if (calls++ > 0) {
            family.groups[0].label = "renamed";
        }
        return GroupedData{signal_data(60, seed), family};
    };
    try {
        repeat_selection(bad, config, EliminationMethod::recursive);
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_EQ(std::string(e.what()).rfind("selection run 1: ", 0), 0u);
    }
}
