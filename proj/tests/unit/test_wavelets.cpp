#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "wavesel/error.hpp"
#include "wavesel/panel.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/wavelets.hpp"

using namespace wavesel;

namespace {

std::vector<double> random_signal(std::size_t n, Rng& rng) {
    std::vector<double> x(n);
    for (auto& v : x) {
        v = rng.normal();
    }
    return x;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

TEST(WaveletFilter, OrthonormalityAndVanishingMoments) {
    for (const int vm : {2, 4}) {
        const auto f = WaveletFilter::daubechies(vm);
        ASSERT_EQ(f.length(), static_cast<std::size_t>(2 * vm));
        const auto h = f.lowpass();
        const auto g = f.highpass();
        double s = 0.0;
        double s2 = 0.0;
        for (const auto v : h) {
            s += v;
            s2 += v * v;
        }
        EXPECT_NEAR(s, std::sqrt(2.0), 1e-12);
        EXPECT_NEAR(s2, 1.0, 1e-12);
        // Even shifts are orthogonal.
        for (std::size_t shift = 2; shift < h.size(); shift += 2) {
            double dot = 0.0;
            for (std::size_t k = 0; k + shift < h.size(); ++k) {
                dot += h[k] * h[k + shift];
            }
            EXPECT_NEAR(dot, 0.0, 1e-12);
        }
        for (int p = 0; p < vm; ++p) {
            double moment = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) {
                moment += std::pow(static_cast<double>(k), p) * g[k];
            }
            EXPECT_NEAR(moment, 0.0, 1e-9) << "db" << vm << " moment " << p;
        }
    }
    EXPECT_EQ(WaveletFilter::from_name("db4").vanishing_moments(), 4);
    EXPECT_THROW(WaveletFilter::daubechies(3), InvalidInput);
    EXPECT_THROW(WaveletFilter::from_name("haar"), InvalidInput);
}

TEST(Dwt, ConstantSignal) {
    for (const char* name : {"db2", "db4"}) {
        const auto f = WaveletFilter::from_name(name);
        const std::vector<double> x(64, 1.5);
        const auto c = dwt(x, f);
        EXPECT_NEAR(c.scaling(), 1.5 * 8.0, 1e-12);
        for (std::size_t i = 1; i < c.size(); ++i) {
            EXPECT_NEAR(c.coefficients()[i], 0.0, 1e-12);
        }
    }
}

TEST(Dwt, ZeroSignal) {
    const auto f = WaveletFilter::daubechies(4);
    const auto c = dwt(std::vector<double>(32, 0.0), f);
    for (const auto v : c.coefficients()) {
        EXPECT_EQ(v, 0.0);
    }
    for (const auto v : idwt(WaveletDecomposition(std::vector<double>(32, 0.0)), f)) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Dwt, MatchesBasisOracle) {
    Rng rng(1);
    for (const int vm : {2, 4}) {
        const auto f = WaveletFilter::daubechies(vm);
        for (const std::size_t levels : {3u, 6u}) {
            const auto basis = test::periodized_basis(f, levels);
            const auto x = random_signal(basis.size(), rng);
            const auto c = dwt(x, f);
            for (std::size_t w = 0; w < basis.size(); ++w) {
                const double dot = std::inner_product(x.begin(), x.end(), basis[w].begin(), 0.0);
                EXPECT_NEAR(c.coefficients()[w], dot, 1e-9);
            }
        }
    }
}

TEST(Dwt, UnitCoefficientReconstructsBasisVector) {
    const auto f = WaveletFilter::daubechies(2);
    const auto basis = test::periodized_basis(f, 5);
    for (std::size_t w = 0; w < basis.size(); ++w) {
        std::vector<double> c(basis.size(), 0.0);
        c[w] = 1.0;
        const auto x = idwt(WaveletDecomposition(c), f);
        EXPECT_LT(max_abs_diff(x, basis[w]), 1e-12);
    }
}

TEST(Dwt, RoundTripAndParseval) {
    Rng rng(2);
    for (const int vm : {2, 4}) {
        const auto f = WaveletFilter::daubechies(vm);
        for (std::size_t n = f.length(); n <= 1024; n *= 2) {
            const auto x = random_signal(n, rng);
            const auto c = dwt(x, f);
            ASSERT_EQ(c.size(), n);
            EXPECT_LT(max_abs_diff(idwt(c, f), x), 1e-10);
            double ex = 0.0;
            double ec = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ex += x[i] * x[i];
                ec += c.coefficients()[i] * c.coefficients()[i];
            }
            EXPECT_LT(std::abs(ex - ec) / ex, 1e-9);
        }
    }
}

TEST(Dwt, LengthErrors) {
    const auto f = WaveletFilter::daubechies(4);
    EXPECT_THROW(dwt(std::vector<double>(12, 0.0), f), InvalidInput);
    EXPECT_THROW(dwt(std::vector<double>(4, 0.0), f), InvalidInput); // shorter than the filter
    EXPECT_THROW(dyadic_levels(1), InvalidInput);
    EXPECT_EQ(dyadic_levels(256), 8u);
    try {
        dyadic_levels(100);
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_EQ(std::string(e.what()), "length must be 2^J (got 100)");
    }
    EXPECT_THROW(WaveletDecomposition(std::vector<double>(6, 0.0)), InvalidInput);
}

TEST(Decomposition, WaveletOrderIndexing) {
    std::vector<double> c(16);
    std::iota(c.begin(), c.end(), 0.0);
    const WaveletDecomposition d(c);
    EXPECT_EQ(d.levels(), 4u);
    EXPECT_EQ(d.scaling(), 0.0);
    EXPECT_EQ(d.detail(0, 0), 1.0);
    EXPECT_EQ(d.detail(2, 3), 7.0);
    EXPECT_EQ(d.level(3).size(), 8u);
    EXPECT_EQ(d.level(3)[0], 8.0);
}

TEST(Panel, DecomposeReconstruct) {
    CurvePanel panel({"a", "b"}, 3, 16);
    Rng rng(3);
    for (auto& block : panel.values) {
        for (auto& v : block) {
            v = rng.normal();
        }
    }
    const auto f = WaveletFilter::daubechies(2);
    const auto c = decompose(panel, f);
    EXPECT_EQ(c.levels(), 4u);
    const auto direct = dwt(panel.curve(1, 2), f);
    EXPECT_LT(max_abs_diff(c.row(1, 2), direct.coefficients()), 1e-15);
    const auto back = reconstruct(c, f);
    for (std::size_t u = 0; u < 2; ++u) {
        EXPECT_LT(max_abs_diff(back.values[u], panel.values[u]), 1e-10);
    }
    CurvePanel bad({"a"}, 2, 12);
    EXPECT_THROW(decompose(bad, f), InvalidInput);
}

TEST(Support, MatchesOracleNonzeroPattern) {
    for (const int vm : {2, 4}) {
        const auto f = WaveletFilter::daubechies(vm);
        const std::size_t levels = 6;
        const auto basis = test::periodized_basis(f, levels);
        const SupportTable table(f, levels);
        const std::size_t n = basis.size();
        for (std::size_t t = 0; t < n; ++t) {
            std::vector<LevelPosition> expected;
            for (std::size_t j = 0; j < levels; ++j) {
                for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
                    if (std::abs(basis[(std::size_t{1} << j) + k][t]) > 1e-12) {
                        expected.push_back({j, k});
                    }
                }
            }
            EXPECT_EQ(table.at_sample(t), expected) << "db" << vm << " t " << t;
            EXPECT_LE(expected.size(), levels * static_cast<std::size_t>(2 * vm - 1));
        }
    }
}

TEST(Support, AtMostThreePerLevelForDb2) {
    const SupportTable table(WaveletFilter::daubechies(2), 8);
    for (std::size_t t = 0; t < table.length(); ++t) {
        std::vector<std::size_t> per_level(8, 0);
        for (const auto& lp : table.at_sample(t)) {
            ++per_level[lp.level];
        }
        for (const auto c : per_level) {
            EXPECT_LE(c, 3u);
        }
    }
}

TEST(Support, IntervalIsIntersection) {
    const auto f = WaveletFilter::daubechies(4);
    const SupportTable table(f, 8);
    auto expected = table.at_sample(49);
    for (std::size_t t = 50; t <= 54; ++t) {
        std::vector<LevelPosition> next;
        const auto& s = table.at_sample(t);
        std::set_intersection(expected.begin(), expected.end(), s.begin(), s.end(), std::back_inserter(next));
        expected = next;
    }
    EXPECT_EQ(table.on_samples(49, 54), expected);
    EXPECT_EQ(table.on_interval(50.0 / 256, 55.0 / 256), expected);
    EXPECT_EQ(interval_support(50.0 / 256, 55.0 / 256, f, 8), expected);
    EXPECT_EQ(table.on_samples(10, 10), table.at_sample(10));
    // Widening the interval can only shrink the support.
    const auto wider = table.on_samples(40, 60);
    EXPECT_TRUE(std::includes(expected.begin(), expected.end(), wider.begin(), wider.end()));
    EXPECT_FALSE(expected.empty());
}

TEST(Support, GridTimes) {
    EXPECT_EQ(time_to_sample(3.0 / 8.0, 8), 2u);
    EXPECT_EQ(time_to_sample(1.0, 8), 7u);
    EXPECT_DOUBLE_EQ(sample_to_time(2, 8), 0.375);
    EXPECT_THROW(time_to_sample(0.3, 8), InvalidInput);
    EXPECT_THROW(time_to_sample(0.0, 8), InvalidInput);
    EXPECT_THROW(wavelet_support(0.3, WaveletFilter::daubechies(2), 3), InvalidInput);
    EXPECT_EQ(wavelet_support(0.25, WaveletFilter::daubechies(2), 4), SupportTable(WaveletFilter::daubechies(2), 4).at_sample(3));
    const SupportTable table(WaveletFilter::daubechies(2), 3);
    EXPECT_THROW(table.on_interval(0.3, 0.32), InvalidInput);
}
