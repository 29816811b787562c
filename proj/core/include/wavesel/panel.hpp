#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavesel/wavelets.hpp"

namespace wavesel {

/// n discretized curves of length N for each of p functional variables.
struct CurvePanel {
    std::vector<std::string> variables;
    std::size_t curves = 0;
    std::size_t samples = 0;
    /// One curves x samples row-major block per variable.
    std::vector<std::vector<double>> values;

    CurvePanel() = default;
    CurvePanel(std::vector<std::string> variables, std::size_t curves, std::size_t samples);

    std::span<const double> curve(std::size_t variable, std::size_t i) const {
        return std::span(values[variable]).subspan(i * samples, samples);
    }
    std::span<double> curve(std::size_t variable, std::size_t i) {
        return std::span(values[variable]).subspan(i * samples, samples);
    }

    /// Throws InvalidInput for ragged blocks or non-finite values.
    void validate() const;
};

/// Wavelet coefficients of a curve panel: for each variable a curves x N row-major block
/// in wavelet order (index 0 = scaling coefficient, 2^j + k = xi_{jk}).
struct CoefficientPanel {
    std::vector<std::string> variables;
    std::size_t curves = 0;
    std::size_t length = 0;
    std::vector<std::vector<double>> values;

    std::size_t levels() const { return dyadic_levels(length); }
    std::span<const double> row(std::size_t variable, std::size_t i) const {
        return std::span(values[variable]).subspan(i * length, length);
    }
    std::span<double> row(std::size_t variable, std::size_t i) {
        return std::span(values[variable]).subspan(i * length, length);
    }
};

/// DWT of every curve. Throws InvalidInput "length must be 2^J" for non-dyadic panels.
CoefficientPanel decompose(const CurvePanel& panel, const WaveletFilter& filter);

/// Inverse DWT of every coefficient row.
CurvePanel reconstruct(const CoefficientPanel& coefficients, const WaveletFilter& filter);

} // namespace wavesel
