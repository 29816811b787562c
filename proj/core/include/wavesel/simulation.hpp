#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/forest.hpp"
#include "wavesel/groups.hpp"
#include "wavesel/panel.hpp"

namespace wavesel {

enum class Link { none, linear, logistic };

std::string to_string(Link link);
Link parse_link(std::string_view name);

/// Wavelet-domain generator for one or several functional variables:
///   zeta_i   = omega_0    + h_zeta(Z_i) + sigma * eta
///   xi_{ijk} = omega_{jk} + h_{jk}(Z_i) + sigma * eta   for j <= j*, 0 above,
/// with omega_0 ~ N(3, 1) and omega_{jk} ~ N(0, tau_j^2), tau_j = exp(-(j - 1)), drawn once
/// per variable. Curves are the inverse DWT of the coefficients.
struct GeneralDesign {
    std::size_t curves = 1000;
    std::size_t length = 256;
    std::vector<std::string> variables{"X"};
    double sigma = 0.05;
    /// Highest level carrying signal (j*).
    std::size_t max_level = 7;
    Link link = Link::none;
    /// theta per coefficient in wavelet order (index 0 is theta_zeta). Empty means all zero.
    std::vector<double> theta;
    std::string filter = "db4";

    void validate() const;
};

struct SimulatedPanel {
    CurvePanel panel;
    std::vector<double> outcome;
    /// Coefficients the curves were synthesized from.
    CoefficientPanel coefficients;
    /// Labels of the groups (or variables) that carry signal about the outcome.
    std::vector<std::string> relevant;
    std::string design;
};

/// tau_j = exp(-(j - 1)).
double omega_scale(std::size_t level);

/// General design with Z = Y ~ N(0, outcome_variance), shared by every variable.
SimulatedPanel simulate_general(const GeneralDesign& design, std::uint64_t seed, double outcome_variance = 3.0);

/// General design with explicit latent values: latent[u] drives variable u (a single
/// vector is shared by all variables). `outcome` is stored as is.
SimulatedPanel simulate_general(const GeneralDesign& design, const std::vector<std::vector<double>>& latent,
                                std::vector<double> outcome, std::uint64_t seed);

struct Experiment1Params {
    std::size_t curves = 1000;
    std::size_t length = 256;
    double sigma = 0.01;
    std::size_t max_level = 7;
    /// T* = [t_first, t_last] with t_l = l / N (1-based l).
    std::size_t first = 50;
    std::size_t last = 55;
    double outcome_variance = 3.0;
};

/// Simulation 1: Y ~ N(0, 3); zeta and every detail in S(T*) receive +Y_i.
SimulatedPanel experiment1_sim1(const Experiment1Params& params, std::uint64_t seed);

/// Simulation 2: linkless curves; Y_i = (1000 / |T*|) * sum_{l in T*} |X_i(t_l) - X_i(t_{l-1})|.
SimulatedPanel experiment1_sim2(const Experiment1Params& params, std::uint64_t seed);

/// The oscillation outcome of Simulation 2 for one curve (1-based grid indices, first >= 2).
double oscillation_outcome(std::span<const double> curve, std::size_t first, std::size_t last);

struct Experiment2Params {
    std::size_t curves = 1000;
    std::size_t length = 256;
    double sigma = 0.05;
    std::size_t max_level = 7;
    Link link = Link::linear;
    double theta_zeta = 0.1;
    /// theta_j for j = 0, 1, ...; levels beyond the list carry no signal.
    std::vector<double> theta_levels{0.1, 0.07, 0.04, 0.01};
    double outcome_variance = 3.0;
};

SimulatedPanel experiment2(const Experiment2Params& params, std::uint64_t seed);

struct Experiment3Params {
    std::size_t curves = 1000;
    std::size_t length = 512;
    std::size_t variables = 10;
    /// Noisy copies of X1 and X2.
    std::size_t replicates = 10;
    double sigma = 0.1;
    double replicate_sigma = 0.05;
    std::size_t max_level = 3;
    std::vector<double> coefficients{3.5, 3.0, 2.5, 2.5};
};

/// Variables are ordered X1, X1_1..X1_q, X2, X2_1..X2_q, X3, ..., Xp.
SimulatedPanel experiment3(const Experiment3Params& params, std::uint64_t seed);

enum class AppendixBCase { c1a, c1b, c1c, c1d, c2a, c2b, c3 };

std::string to_string(AppendixBCase c);
/// Accepts "1a".."1d", "2a", "2b", "3" (optionally prefixed with "b").
AppendixBCase parse_appendix_b_case(std::string_view name);

struct AppendixBData {
    /// Columns W1..Wp, Z1..Zp.
    Dataset data;
    /// Variance of Y given X.
    double residual_variance = 1.0;
    /// True when the linear cases hit the residual-variance floor.
    bool variance_floored = false;
    /// Coefficients of the linear cases (empty otherwise).
    std::vector<double> alpha;
    Group w_group;
    Group z_group;
};

/// Residual-variance floor used when tau^T C_w^{-1} tau >= 1.
inline constexpr double kResidualVarianceFloor = 0.05;

AppendixBData appendix_b(AppendixBCase which, std::size_t p, std::size_t n, std::uint64_t seed);

/// 0-based samples of `points` equally spaced scan times: l_i = 1 + round(i (N - 1) / (points - 1)).
std::vector<std::size_t> scan_samples(std::size_t length, std::size_t points);

struct TimeScanConfig {
    ForestConfig forest;
    std::size_t points = 50;
    std::string filter = "db4";
    std::size_t importance_repeats = 1;
};

/// Grouped importance of G(t) at every scan time for one panel, from one forest fitted on
/// the full wavelet design. The forest seed is derived from `seed`.
std::vector<double> scan_importance(const CurvePanel& panel, const std::vector<double>& outcome,
                                    const TimeScanConfig& config, std::uint64_t seed);

struct TimeScan {
    std::vector<std::size_t> samples;
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> q25;
    std::vector<double> q75;
    /// [replicate][point]
    std::vector<std::vector<double>> replicates;

    /// Scan point with the largest importance in a replicate (first on ties).
    std::size_t argmax(std::size_t replicate) const;
};

/// Mean and type-7 quartiles over replicates.
TimeScan summarize_scan(std::vector<std::size_t> samples, std::size_t length,
                        std::vector<std::vector<double>> replicates);

/// Replicate r scans generator(derive_seed(seed, {r})).
TimeScan time_importance_scan(const std::function<SimulatedPanel(std::uint64_t)>& generator, std::size_t replicates,
                              const TimeScanConfig& config, std::uint64_t seed);

/// Fixed panel: replicates differ only in forest and permutation randomness.
TimeScan time_importance_scan(const CurvePanel& panel, const std::vector<double>& outcome, std::size_t replicates,
                              const TimeScanConfig& config, std::uint64_t seed);

/// Type-7 sample quantile.
double quantile(std::vector<double> values, double p);

} // namespace wavesel
