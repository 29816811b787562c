#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavesel/dataset.hpp"
#include "wavesel/groups.hpp"
#include "wavesel/panel.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/shrinkage.hpp"
#include "wavesel/simulation.hpp"

namespace wavesel {

/// Design matrix built from the wavelet coefficients of a curve panel, optionally reduced
/// by simultaneous shrinkage.
struct WaveletDesign {
    CoefficientLayout layout;
    Dataset data;
    std::optional<PanelShrinkage> shrinkage;
};

WaveletDesign wavelet_design(const CurvePanel& panel, const std::vector<double>& outcome, const WaveletFilter& filter,
                             const std::optional<ShrinkageConfig>& shrink = std::nullopt);

enum class Scheme {
    /// One group per functional variable.
    by_variable,
    /// G_zeta and G(j) pooled over variables.
    by_level,
    /// G_zeta(u) and G(j, u) for every variable.
    by_level_and_variable,
    /// One group per column.
    by_column,
};

std::string to_string(Scheme scheme);
/// Throws InvalidInput for unknown names.
Scheme parse_scheme(std::string_view name);

/// Partition of the layout's columns under `scheme`.
GroupFamily make_family(const CoefficientLayout& layout, Scheme scheme);

/// Reduced-size settings for reproducing the simulation experiments.
struct DeskScale {
    std::size_t curves = 400;
    std::size_t trees = 100;
    std::size_t runs = 20;
    /// Noisy replicates of X1 and X2 in experiment 3.
    std::size_t replicates = 5;
    std::size_t scan_replicates = 10;
    std::size_t scan_points = 50;
    std::size_t mtry = 0;
    std::size_t min_leaf_size = 1;
    unsigned threads = 1;
};

SelectionConfig desk_selection_config(const DeskScale& scale, std::uint64_t seed);

/// Experiment 2: level selection with {G_zeta, G(0), ..., G(J-1)} on the raw coefficients.
AggregateReport run_experiment2(Link link, EliminationMethod method, const DeskScale& scale, std::uint64_t seed);

/// Experiment 3: variable selection after simultaneous shrinkage with the known noise level.
AggregateReport run_experiment3(EliminationMethod method, const DeskScale& scale, std::uint64_t seed);

/// Experiment 1 time scan (simulation 1 or 2) over fresh replicates.
TimeScan run_experiment1(int simulation, const DeskScale& scale, std::uint64_t seed);

/// Grouped importance of W next to the sum of the individual importances of its columns.
struct GroupVersusIndividual {
    std::size_t p = 0;
    std::size_t replicate = 0;
    double grouped = 0.0;
    double rescaled = 0.0;
    double sum_individual = 0.0;
};

/// One appendix-B replicate: simulate, fit a forest on all 2p columns, and estimate
/// I(W) and sum_j I(W_j).
GroupVersusIndividual appendix_b_replicate(AppendixBCase which, std::size_t p, std::size_t n,
                                           const ForestConfig& forest, std::uint64_t seed);

/// Replicates for every p; replicate r of size p uses derive_seed(seed, {p, r}).
std::vector<GroupVersusIndividual> run_appendix_b(AppendixBCase which, const std::vector<std::size_t>& sizes,
                                                  std::size_t replicates, std::size_t n, const ForestConfig& forest,
                                                  std::uint64_t seed);

} // namespace wavesel
