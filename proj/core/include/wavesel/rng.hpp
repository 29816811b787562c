#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace wavesel {

/// Identifies the bit-generator and the transforms used on top of it. Recorded in run
/// manifests so a run can be reproduced on another platform.
inline constexpr std::string_view kGeneratorName = "mt19937_64+lemire-index+box-muller/v1";

/// Mixes a root seed with a path of stream identifiers (tree index, group id, run index...)
/// into an independent 64-bit seed. Pure function of its arguments.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Random stream with platform-independent uniform, index and Gaussian draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the standard; the
/// distribution transforms are implemented here because the standard library ones are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer on [0, bound). bound must be positive.
    std::uint64_t index(std::uint64_t bound);

    /// Standard normal draw.
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

    template <class T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(index(i));
            using std::swap;
            swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace wavesel
