#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/wavelets.hpp"

namespace wavesel::test {

/// n x p standard-normal design; response filled by the caller.
inline std::vector<std::vector<double>> normal_columns(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> cols(p, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            cols[j][i] = rng.normal();
        }
    }
    return cols;
}

inline std::vector<std::string> names(std::size_t p, const std::string& prefix = "x") {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < p; ++j) {
        out.push_back(prefix + std::to_string(j));
    }
    return out;
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (const auto x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (const auto x : v) {
        s += (x - m) * (x - m);
    }
    return s / static_cast<double>(v.size() - 1);
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Periodized orthonormal basis on N = 2^J points built from the two-scale recursion
// phi_{J,l} = e_l, phi_{j,k} = sum_l h_l phi_{j+1,(2k+l) mod 2^(j+1)}, psi likewise with g.
// Rows are in wavelet order.
inline std::vector<std::vector<double>> periodized_basis(const WaveletFilter& f, std::size_t levels) {
    const std::size_t n = std::size_t{1} << levels;
    const auto h = f.lowpass();
    const std::size_t len = h.size();
    std::vector<double> g(len);
    for (std::size_t k = 0; k < len; ++k) {
        g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * h[len - 1 - k];
    }
    std::vector<std::vector<double>> phi(n, std::vector<double>(n, 0.0));
    for (std::size_t l = 0; l < n; ++l) {
        phi[l][l] = 1.0;
    }
    std::vector<std::vector<double>> rows(n);
    for (std::size_t j = levels; j-- > 0;) {
        const std::size_t m = std::size_t{1} << (j + 1);
        std::vector<std::vector<double>> coarse(m / 2, std::vector<double>(n, 0.0));
        for (std::size_t k = 0; k < m / 2; ++k) {
            std::vector<double> psi(n, 0.0);
            for (std::size_t l = 0; l < len; ++l) {
                const auto& fine = phi[(2 * k + l) % m];
                for (std::size_t t = 0; t < n; ++t) {
                    coarse[k][t] += h[l] * fine[t];
                    psi[t] += g[l] * fine[t];
                }
            }
            rows[(std::size_t{1} << j) + k] = psi;
        }
        phi = std::move(coarse);
    }
    rows[0] = phi[0];
    return rows;
}

} // namespace wavesel::test
