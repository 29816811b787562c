#include "wavesel/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavesel/error.hpp"

namespace wavesel {

double median(std::vector<double> values) {
    if (values.empty()) {
        throw InvalidInput("median of an empty sample");
    }
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), mid);
    return lower + (upper - lower) / 2.0;
}

double mad_sigma(std::span<const double> finest_level) {
    if (finest_level.empty()) {
        throw InvalidInput("MAD of an empty sample");
    }
    const double center = median({finest_level.begin(), finest_level.end()});
    std::vector<double> dev;
    dev.reserve(finest_level.size());
    for (const double v : finest_level) {
        dev.push_back(std::abs(v - center));
    }
    return median(std::move(dev)) / 0.6745;
}

double universal_threshold(std::size_t length, double sigma) {
    if (length < 2) {
        throw InvalidInput("universal threshold needs N >= 2");
    }
    if (sigma < 0.0) {
        throw InvalidInput("sigma must be non-negative");
    }
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(length)));
}

WaveletDecomposition hard_threshold_single(WaveletDecomposition decomposition, double delta) {
    if (!(delta >= 0.0)) {
        throw InvalidInput("threshold must be non-negative");
    }
    auto c = decomposition.coefficients();
    for (std::size_t w = 1; w < c.size(); ++w) {
        if (!(std::abs(c[w]) > delta)) {
            c[w] = 0.0;
        }
    }
    return decomposition;
}

WaveletDecomposition mean_signal_shrink(std::span<const double> curves, std::size_t curve_count,
                                        const WaveletFilter& filter, double sigma) {
    if (curve_count == 0 || curves.size() % curve_count != 0) {
        throw InvalidInput("ragged curve block");
    }
    const std::size_t length = curves.size() / curve_count;
    dyadic_levels(length);
    std::vector<double> mean(length, 0.0);
    for (std::size_t i = 0; i < curve_count; ++i) {
        for (std::size_t l = 0; l < length; ++l) {
            mean[l] += curves[i * length + l];
        }
    }
    for (auto& v : mean) {
        v /= static_cast<double>(curve_count);
    }
    const double delta = universal_threshold(length, sigma) / std::sqrt(static_cast<double>(curve_count));
    return hard_threshold_single(dwt(mean, filter), delta);
}

double joint_threshold(std::size_t length, std::size_t curves, double q, double sigma_hat) {
    if (length < 2) {
        throw InvalidInput("joint threshold needs N >= 2");
    }
    if (curves == 0) {
        throw InvalidInput("joint threshold needs n >= 1");
    }
    if (!(q > 0.0 && q < 1.0)) {
        throw InvalidInput("q must lie in (0, 1)");
    }
    if (sigma_hat < 0.0) {
        throw InvalidInput("sigma must be non-negative");
    }
    const double x = std::log(static_cast<double>(length) / q);
    const double n = static_cast<double>(curves);
    return sigma_hat * std::sqrt(2.0 * x + 2.0 * std::sqrt(n * x) + n);
}

ShrinkageResult simultaneous_shrink(std::span<const double> coefficients, std::size_t curve_count,
                                    const ShrinkageConfig& config) {
    if (curve_count == 0) {
        throw InvalidInput("simultaneous shrinkage needs at least one curve");
    }
    if (coefficients.size() % curve_count != 0) {
        throw InvalidInput("ragged coefficient block");
    }
    const std::size_t length = coefficients.size() / curve_count;
    const std::size_t levels = dyadic_levels(length);

    ShrinkageResult result;
    result.q = config.q;
    if (config.sigma) {
        if (!(*config.sigma >= 0.0)) {
            throw InvalidInput("sigma must be non-negative");
        }
        result.sigma_hat = *config.sigma;
    } else {
        const std::size_t half = length / 2;
        std::vector<double> finest;
        finest.reserve(curve_count * half);
        for (std::size_t i = 0; i < curve_count; ++i) {
            const auto row = coefficients.subspan(i * length, length);
            finest.insert(finest.end(), row.begin() + static_cast<std::ptrdiff_t>(half), row.end());
        }
        result.sigma_hat = mad_sigma(finest);
    }
    result.threshold = joint_threshold(length, curve_count, config.q, result.sigma_hat);

    result.norms.assign(length, 0.0);
    for (std::size_t i = 0; i < curve_count; ++i) {
        const auto row = coefficients.subspan(i * length, length);
        for (std::size_t w = 0; w < length; ++w) {
            result.norms[w] += row[w] * row[w];
        }
    }
    for (auto& v : result.norms) {
        v = std::sqrt(v);
    }
    for (std::size_t j = 0; j < levels; ++j) {
        for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
            if (result.norms[WaveletDecomposition::index(j, k)] > result.threshold) {
                result.kept.push_back({j, k});
            }
        }
    }
    return result;
}

void apply_shrinkage(std::span<double> coefficients, std::size_t curve_count, const ShrinkageResult& result) {
    if (curve_count == 0 || coefficients.size() != curve_count * result.norms.size()) {
        throw InvalidInput("coefficient block does not match the shrinkage result");
    }
    const std::size_t length = result.norms.size();
    std::vector<char> keep(length, 0);
    keep[0] = 1;
    for (const auto& lp : result.kept) {
        keep[WaveletDecomposition::index(lp.level, lp.position)] = 1;
    }
    for (std::size_t i = 0; i < curve_count; ++i) {
        for (std::size_t w = 0; w < length; ++w) {
            if (!keep[w]) {
                coefficients[i * length + w] = 0.0;
            }
        }
    }
}

PanelShrinkage shrink_panel(const CoefficientPanel& coefficients, const CoefficientLayout& layout,
                            const ShrinkageConfig& config) {
    if (!layout.is_complete() || layout.length() != coefficients.length ||
        layout.variables().size() != coefficients.variables.size()) {
        throw InvalidInput("shrink_panel needs the complete layout of the coefficient panel");
    }
    PanelShrinkage out;
    for (std::size_t u = 0; u < coefficients.variables.size(); ++u) {
        out.per_variable.push_back(simultaneous_shrink(coefficients.values[u], coefficients.curves, config));
        out.kept_columns.push_back(*layout.find(u, CoefficientRef::kScalingLevel, 0));
        for (const auto& lp : out.per_variable.back().kept) {
            out.kept_columns.push_back(*layout.find(u, static_cast<int>(lp.level), lp.position));
        }
    }
    return out;
}

} // namespace wavesel
