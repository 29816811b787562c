#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wavesel/groups.hpp"
#include "wavesel/panel.hpp"
#include "wavesel/wavelets.hpp"

namespace wavesel {

/// Median; even-length inputs give the mean of the two central order statistics.
double median(std::vector<double> values);

/// Med(|x - Med(x)|) / 0.6745. Throws InvalidInput on empty input.
double mad_sigma(std::span<const double> finest_level);

/// sigma * sqrt(2 log N).
double universal_threshold(std::size_t length, double sigma);

/// Keeps xi_{jk} iff |xi_{jk}| > delta; the scaling coefficient is never touched.
WaveletDecomposition hard_threshold_single(WaveletDecomposition decomposition, double delta);

/// DWT of the pointwise mean of n curves (rows of a curves x N block), hard-thresholded at
/// (sigma / sqrt(n)) * sqrt(2 log N).
WaveletDecomposition mean_signal_shrink(std::span<const double> curves, std::size_t curve_count,
                                        const WaveletFilter& filter, double sigma);

/// sigma_hat * sqrt(2 log(N/q) + 2 sqrt(n log(N/q)) + n), the threshold on the n-vector norm
/// of a detail coefficient that keeps the probability of retaining any pure-noise
/// coefficient below q.
double joint_threshold(std::size_t length, std::size_t curves, double q, double sigma_hat);

struct ShrinkageConfig {
    /// Probability budget for retaining a pure-noise coefficient.
    double q = 0.05;
    /// Known noise level; estimated by MAD over all curves' finest level when absent.
    std::optional<double> sigma;
};

struct ShrinkageResult {
    /// Detail indices whose n-vector norm exceeds the threshold, sorted.
    std::vector<LevelPosition> kept;
    /// ||xi_{jk}||_n in wavelet order (index 0 holds the norm of the scaling column).
    std::vector<double> norms;
    double threshold = 0.0;
    double sigma_hat = 0.0;
    double q = 0.0;
};

/// Joint hard thresholding of n wavelet decompositions: the whole vector
/// (xi_{1jk}, ..., xi_{njk}) is kept iff its Euclidean norm exceeds joint_threshold.
/// `coefficients` is a curves x N row-major block in wavelet order.
ShrinkageResult simultaneous_shrink(std::span<const double> coefficients, std::size_t curve_count,
                                    const ShrinkageConfig& config);

/// Zeroes the detail columns not kept by `result` (in place, curves x N block).
void apply_shrinkage(std::span<double> coefficients, std::size_t curve_count, const ShrinkageResult& result);

/// Per-variable simultaneous shrinkage of a coefficient panel.
struct PanelShrinkage {
    std::vector<ShrinkageResult> per_variable;
    /// Columns of the complete layout that survive: every scaling column plus kept details.
    std::vector<std::size_t> kept_columns;
};

PanelShrinkage shrink_panel(const CoefficientPanel& coefficients, const CoefficientLayout& layout,
                            const ShrinkageConfig& config);

} // namespace wavesel
