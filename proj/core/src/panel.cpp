#include "wavesel/panel.hpp"

#include <cmath>

#include "wavesel/error.hpp"

namespace wavesel {

CurvePanel::CurvePanel(std::vector<std::string> vars, std::size_t n, std::size_t len)
    : variables(std::move(vars)), curves(n), samples(len), values(variables.size(), std::vector<double>(n * len, 0.0)) {}

void CurvePanel::validate() const {
    if (variables.empty() || curves == 0 || samples == 0) {
        throw InvalidInput("curve panel is empty");
    }
    if (values.size() != variables.size()) {
        throw InvalidInput("curve panel has " + std::to_string(values.size()) + " blocks for " +
                           std::to_string(variables.size()) + " variables");
    }
    for (std::size_t u = 0; u < values.size(); ++u) {
        if (values[u].size() != curves * samples) {
            throw InvalidInput("ragged curve block for variable '" + variables[u] + "'");
        }
        for (const double v : values[u]) {
            if (!std::isfinite(v)) {
                throw InvalidInput("non-finite curve value for variable '" + variables[u] + "'");
            }
        }
    }
}

CoefficientPanel decompose(const CurvePanel& panel, const WaveletFilter& filter) {
    panel.validate();
    dyadic_levels(panel.samples);
    CoefficientPanel out;
    out.variables = panel.variables;
    out.curves = panel.curves;
    out.length = panel.samples;
    out.values.resize(panel.variables.size());
    for (std::size_t u = 0; u < panel.variables.size(); ++u) {
        auto& block = out.values[u];
        block.resize(panel.curves * panel.samples);
        for (std::size_t i = 0; i < panel.curves; ++i) {
            const auto d = dwt(panel.curve(u, i), filter);
            std::copy(d.coefficients().begin(), d.coefficients().end(),
                      block.begin() + static_cast<std::ptrdiff_t>(i * panel.samples));
        }
    }
    return out;
}

CurvePanel reconstruct(const CoefficientPanel& coefficients, const WaveletFilter& filter) {
    dyadic_levels(coefficients.length);
    CurvePanel out(coefficients.variables, coefficients.curves, coefficients.length);
    for (std::size_t u = 0; u < coefficients.variables.size(); ++u) {
        if (coefficients.values[u].size() != coefficients.curves * coefficients.length) {
            throw InvalidInput("coefficient block size mismatch for variable '" + coefficients.variables[u] + "'");
        }
        for (std::size_t i = 0; i < coefficients.curves; ++i) {
            const auto row = coefficients.row(u, i);
            const auto x = idwt(WaveletDecomposition(std::vector<double>(row.begin(), row.end())), filter);
            std::copy(x.begin(), x.end(), out.curve(u, i).begin());
        }
    }
    return out;
}

} // namespace wavesel
