#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavesel {

/// Orthonormal Daubechies filter pair. The lowpass coefficients satisfy
/// sum h_k^2 = 1 and sum h_k = sqrt(2); the highpass is g_k = (-1)^k h_{L-1-k}.
class WaveletFilter {
public:
    /// Daubechies filter with 2 or 4 vanishing moments (lengths 4 and 8).
    static WaveletFilter daubechies(int vanishing_moments);
    /// Accepts "db2" or "db4".
    static WaveletFilter from_name(std::string_view name);

    int vanishing_moments() const { return vanishing_moments_; }
    std::size_t length() const { return lowpass_.size(); }
    std::span<const double> lowpass() const { return lowpass_; }
    std::span<const double> highpass() const { return highpass_; }
    std::string name() const { return "db" + std::to_string(vanishing_moments_); }

private:
    WaveletFilter(int vanishing_moments, std::vector<double> lowpass);

    int vanishing_moments_ = 0;
    std::vector<double> lowpass_;
    std::vector<double> highpass_;
};

/// Number of levels J of a length N = 2^J signal. Throws InvalidInput "length must be 2^J"
/// for any other length (including 1).
std::size_t dyadic_levels(std::size_t length);

/// Full-depth wavelet decomposition of a length-2^J signal: one scaling coefficient and
/// detail coefficients xi_{jk} for j in [0, J), k in [0, 2^j). Level 0 is the coarsest.
///
/// Coefficients are stored in "wavelet order": index 0 holds the scaling coefficient and
/// index 2^j + k holds xi_{jk}.
class WaveletDecomposition {
public:
    WaveletDecomposition() = default;
    /// Takes coefficients in wavelet order; the size must be a power of two >= 2.
    explicit WaveletDecomposition(std::vector<double> coefficients);

    std::size_t levels() const { return levels_; }
    std::size_t size() const { return coefficients_.size(); }

    double scaling() const { return coefficients_[0]; }
    double& scaling() { return coefficients_[0]; }
    double detail(std::size_t level, std::size_t position) const { return coefficients_[index(level, position)]; }
    double& detail(std::size_t level, std::size_t position) { return coefficients_[index(level, position)]; }

    std::span<const double> coefficients() const { return coefficients_; }
    std::span<double> coefficients() { return coefficients_; }
    /// The 2^j detail coefficients of one level.
    std::span<const double> level(std::size_t j) const { return std::span(coefficients_).subspan(std::size_t{1} << j, std::size_t{1} << j); }

    static std::size_t index(std::size_t level, std::size_t position) { return (std::size_t{1} << level) + position; }

private:
    std::vector<double> coefficients_;
    std::size_t levels_ = 0;
};

/// Periodized pyramid DWT down to a single scaling coefficient. Requires N = 2^J >= filter length.
WaveletDecomposition dwt(std::span<const double> signal, const WaveletFilter& filter);

/// Exact inverse of dwt.
std::vector<double> idwt(const WaveletDecomposition& coefficients, const WaveletFilter& filter);

/// Detail index (j, k).
struct LevelPosition {
    std::size_t level = 0;
    std::size_t position = 0;

    auto operator<=>(const LevelPosition&) const = default;
};

/// Maps a grid time t = l / N (l = 1..N) to its 0-based sample index l - 1. Throws
/// InvalidInput for times that are not on the grid.
std::size_t time_to_sample(double t, std::size_t length);

/// Grid time of a 0-based sample index.
inline double sample_to_time(std::size_t sample, std::size_t length) {
    return static_cast<double>(sample + 1) / static_cast<double>(length);
}

/// Grid samples of every periodized wavelet psi_{jk} for one filter and depth, with the
/// derived supports S(t) = {(j, k) : psi_{jk}(t) != 0}. A value counts as non-null when its
/// magnitude exceeds 1e-12.
class SupportTable {
public:
    SupportTable(const WaveletFilter& filter, std::size_t levels);

    std::size_t levels() const { return levels_; }
    std::size_t length() const { return std::size_t{1} << levels_; }

    /// psi_{jk} sampled on the grid (length N).
    std::span<const double> wavelet(std::size_t level, std::size_t position) const;

    /// S(t) at a 0-based sample index, sorted.
    const std::vector<LevelPosition>& at_sample(std::size_t sample) const;
    /// S(t) for a grid time t.
    const std::vector<LevelPosition>& at_time(double t) const { return at_sample(time_to_sample(t, length())); }

    /// S([a, b]) = intersection of S(t) over the grid samples first..last (inclusive).
    std::vector<LevelPosition> on_samples(std::size_t first, std::size_t last) const;
    /// S([a, b]) for grid-aligned times; throws when no grid time lies in [a, b].
    std::vector<LevelPosition> on_interval(double a, double b) const;

    static constexpr double kNonNullThreshold = 1e-12;

private:
    std::size_t levels_;
    std::vector<double> basis_; // row w (wavelet order) holds the grid samples of that basis vector
    std::vector<std::vector<LevelPosition>> supports_;
};

/// Convenience wrappers building a SupportTable on the fly.
std::vector<LevelPosition> wavelet_support(double t, const WaveletFilter& filter, std::size_t levels);
std::vector<LevelPosition> interval_support(double a, double b, const WaveletFilter& filter, std::size_t levels);

} // namespace wavesel
