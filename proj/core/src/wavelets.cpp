#include "wavesel/wavelets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>

#include "wavesel/error.hpp"

namespace wavesel {

namespace {

// Daubechies (1992) extremal-phase filters, normalized so that the taps sum to sqrt(2).
constexpr double kDb2[] = {
    0.48296291314453414337487159986,
    0.83651630373780790557529378092,
    0.22414386804201338102597276224,
    -0.12940952255126038117444941881,
};

constexpr double kDb4[] = {
    0.23037781330889650086329118304,
    0.71484657055291564708992195527,
    0.63088076792985890788171633830,
    -0.02798376941685985421141374718,
    -0.18703481171909308407957067279,
    0.03084138183556076362721936253,
    0.03288301166688519973540751355,
    -0.01059740178506903210488320852,
};

} // namespace

WaveletFilter::WaveletFilter(int vanishing_moments, std::vector<double> lowpass)
    : vanishing_moments_(vanishing_moments), lowpass_(std::move(lowpass)) {
    const std::size_t n = lowpass_.size();
    highpass_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        highpass_[k] = sign * lowpass_[n - 1 - k];
    }
}

WaveletFilter WaveletFilter::daubechies(int vanishing_moments) {
    switch (vanishing_moments) {
    case 2:
        return WaveletFilter(2, {std::begin(kDb2), std::end(kDb2)});
    case 4:
        return WaveletFilter(4, {std::begin(kDb4), std::end(kDb4)});
    default:
        throw InvalidInput("unsupported Daubechies filter: " + std::to_string(vanishing_moments) +
                           " vanishing moments (expected 2 or 4)");
    }
}

WaveletFilter WaveletFilter::from_name(std::string_view name) {
    if (name == "db2") {
        return daubechies(2);
    }
    if (name == "db4") {
        return daubechies(4);
    }
    throw InvalidInput("unknown wavelet filter '" + std::string(name) + "' (expected db2 or db4)");
}

std::size_t dyadic_levels(std::size_t length) {
    if (length < 2 || !std::has_single_bit(length)) {
        throw InvalidInput("length must be 2^J (got " + std::to_string(length) + ")");
    }
    return static_cast<std::size_t>(std::countr_zero(length));
}

WaveletDecomposition::WaveletDecomposition(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)), levels_(dyadic_levels(coefficients_.size())) {}

WaveletDecomposition dwt(std::span<const double> signal, const WaveletFilter& filter) {
    const std::size_t n = signal.size();
    const std::size_t levels = dyadic_levels(n);
    if (n < filter.length()) {
        throw InvalidInput("signal length " + std::to_string(n) + " is shorter than the " + filter.name() +
                           " filter");
    }
    const auto h = filter.lowpass();
    const auto g = filter.highpass();
    const std::size_t taps = filter.length();

    std::vector<double> out(n);
    std::vector<double> approx(signal.begin(), signal.end());
    std::vector<double> next(n / 2);
    for (std::size_t m = n, j = levels; m > 1; m /= 2) {
        --j;
        const std::size_t half = m / 2;
        double* details = out.data() + half;
        for (std::size_t k = 0; k < half; ++k) {
            double a = 0.0;
            double d = 0.0;
            for (std::size_t l = 0; l < taps; ++l) {
                const double v = approx[(2 * k + l) % m];
                a += h[l] * v;
                d += g[l] * v;
            }
            next[k] = a;
            details[k] = d;
        }
        std::copy_n(next.begin(), half, approx.begin());
    }
    out[0] = approx[0];
    return WaveletDecomposition(std::move(out));
}

std::vector<double> idwt(const WaveletDecomposition& coefficients, const WaveletFilter& filter) {
    const std::size_t n = coefficients.size();
    if (n < 2) {
        throw InvalidInput("coefficient layout is empty");
    }
    if (n < filter.length()) {
        throw InvalidInput("coefficient count " + std::to_string(n) + " is shorter than the " + filter.name() +
                           " filter");
    }
    const auto h = filter.lowpass();
    const auto g = filter.highpass();
    const std::size_t taps = filter.length();
    const auto c = coefficients.coefficients();

    std::vector<double> approx(n, 0.0);
    approx[0] = c[0];
    std::vector<double> next(n);
    for (std::size_t half = 1; half < n; half *= 2) {
        const std::size_t m = 2 * half;
        std::fill_n(next.begin(), m, 0.0);
        const double* details = c.data() + half;
        for (std::size_t k = 0; k < half; ++k) {
            const double a = approx[k];
            const double d = details[k];
            for (std::size_t l = 0; l < taps; ++l) {
                next[(2 * k + l) % m] += h[l] * a + g[l] * d;
            }
        }
        std::copy_n(next.begin(), m, approx.begin());
    }
    return approx;
}

std::size_t time_to_sample(double t, std::size_t length) {
    const double scaled = t * static_cast<double>(length);
    const double l = std::round(scaled);
    if (!std::isfinite(t) || std::abs(scaled - l) > 1e-9 || l < 1.0 || l > static_cast<double>(length)) {
        throw InvalidInput("time " + std::to_string(t) + " is not on the sampling grid l/" + std::to_string(length));
    }
    return static_cast<std::size_t>(l) - 1;
}

SupportTable::SupportTable(const WaveletFilter& filter, std::size_t levels) : levels_(levels) {
    const std::size_t n = length();
    if (levels == 0 || n < filter.length()) {
        throw InvalidInput("support table needs 2^J >= filter length");
    }
    basis_.assign(n * n, 0.0);
    std::vector<double> unit(n, 0.0);
    for (std::size_t w = 0; w < n; ++w) {
        unit[w] = 1.0;
        const auto samples = idwt(WaveletDecomposition(unit), filter);
        std::copy(samples.begin(), samples.end(), basis_.begin() + static_cast<std::ptrdiff_t>(w * n));
        unit[w] = 0.0;
    }
    supports_.resize(n);
    for (std::size_t j = 0; j < levels; ++j) {
        for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
            const auto psi = wavelet(j, k);
            for (std::size_t s = 0; s < n; ++s) {
                if (std::abs(psi[s]) > kNonNullThreshold) {
                    supports_[s].push_back({j, k});
                }
            }
        }
    }
}

std::span<const double> SupportTable::wavelet(std::size_t level, std::size_t position) const {
    if (level >= levels_ || position >= (std::size_t{1} << level)) {
        throw InvalidInput("wavelet index out of range");
    }
    const std::size_t n = length();
    return std::span(basis_).subspan(WaveletDecomposition::index(level, position) * n, n);
}

const std::vector<LevelPosition>& SupportTable::at_sample(std::size_t sample) const {
    if (sample >= length()) {
        throw InvalidInput("sample index " + std::to_string(sample) + " outside the grid");
    }
    return supports_[sample];
}

std::vector<LevelPosition> SupportTable::on_samples(std::size_t first, std::size_t last) const {
    if (first > last || last >= length()) {
        throw InvalidInput("empty or out-of-range sample interval");
    }
    std::vector<LevelPosition> acc = supports_[first];
    std::vector<LevelPosition> tmp;
    for (std::size_t s = first + 1; s <= last && !acc.empty(); ++s) {
        tmp.clear();
        std::set_intersection(acc.begin(), acc.end(), supports_[s].begin(), supports_[s].end(),
                              std::back_inserter(tmp));
        acc.swap(tmp);
    }
    return acc;
}

std::vector<LevelPosition> SupportTable::on_interval(double a, double b) const {
    if (!(a <= b)) {
        throw InvalidInput("interval bounds must satisfy a <= b");
    }
    const double n = static_cast<double>(length());
    const auto first = static_cast<long long>(std::ceil(a * n - 1e-9));
    const auto last = static_cast<long long>(std::floor(b * n + 1e-9));
    const long long lo = std::max(first, 1LL);
    const long long hi = std::min(last, static_cast<long long>(length()));
    if (lo > hi) {
        throw InvalidInput("interval contains no grid time");
    }
    return on_samples(static_cast<std::size_t>(lo - 1), static_cast<std::size_t>(hi - 1));
}

std::vector<LevelPosition> wavelet_support(double t, const WaveletFilter& filter, std::size_t levels) {
    return SupportTable(filter, levels).at_time(t);
}

std::vector<LevelPosition> interval_support(double a, double b, const WaveletFilter& filter, std::size_t levels) {
    return SupportTable(filter, levels).on_interval(a, b);
}

} // namespace wavesel
