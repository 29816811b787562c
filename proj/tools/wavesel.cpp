#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "wavesel/error.hpp"
#include "wavesel/forest.hpp"
#include "wavesel/groups.hpp"
#include "wavesel/importance.hpp"
#include "wavesel/io.hpp"
#include "wavesel/panel.hpp"
#include "wavesel/pipeline.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/shrinkage.hpp"
#include "wavesel/simulation.hpp"
#include "wavesel/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wavesel::cli {
namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kInvalidInput = 3, kNumerical = 4 };

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out = ".";
};

struct ForestOptions {
    std::size_t trees = 100;
    std::size_t mtry = 0;
    std::size_t min_leaf = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Root seed")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores); never changes results")
        ->capture_default_str();
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
}

void add_forest(CLI::App* cmd, ForestOptions& f) {
    cmd->add_option("--trees", f.trees, "Trees per forest")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--mtry", f.mtry, "Features tried per split (0 = max(1, P/3))")->capture_default_str();
    cmd->add_option("--min-leaf", f.min_leaf, "Minimum leaf size")->check(CLI::PositiveNumber)->capture_default_str();
}

ForestConfig forest_config(const ForestOptions& f, const Common& c) {
    ForestConfig config;
    config.num_trees = f.trees;
    config.mtry = f.mtry;
    config.min_leaf_size = f.min_leaf;
    config.seed = c.seed;
    config.threads = c.threads;
    return config;
}

json forest_json(const ForestOptions& f) { return {{"trees", f.trees}, {"mtry", f.mtry}, {"min_leaf", f.min_leaf}}; }

std::string load(Manifest& m, const std::string& path) {
    auto bytes = read_file(path);
    m.input(path, bytes);
    return bytes;
}

// ---------------------------------------------------------------------------

struct DwtArgs {
    Common common;
    std::string panel;
    std::string coefficients;
    std::string filter = "db4";
};

void run_dwt(const DwtArgs& a) {
    Manifest m("dwt", a.common.out);
    m.config() = {{"filter", a.filter}};
    const auto file = parse_panel_csv(load(m, a.panel));
    const auto coeffs = decompose(file.panel, WaveletFilter::from_name(a.filter));
    m.output("coefficients.csv", coefficients_to_csv(coeffs, file.curve_ids));
    m.write();
}

void run_idwt(const DwtArgs& a) {
    Manifest m("idwt", a.common.out);
    m.config() = {{"filter", a.filter}};
    const auto file = parse_coefficients_csv(load(m, a.coefficients));
    const auto panel = reconstruct(file.coefficients, WaveletFilter::from_name(a.filter));
    m.output("panel.csv", panel_to_csv(panel, file.curve_ids));
    m.write();
}

// ---------------------------------------------------------------------------

struct ShrinkArgs {
    Common common;
    std::string coefficients;
    std::string outcome;
    double q = 0.05;
    std::optional<double> sigma;
};

void run_shrink(const ShrinkArgs& a) {
    Manifest m("shrink", a.common.out);
    m.config() = {{"q", a.q}};
    if (a.sigma) {
        m.config()["sigma"] = *a.sigma;
    }
    auto file = parse_coefficients_csv(load(m, a.coefficients));
    auto& coeffs = file.coefficients;
    const CoefficientLayout layout(coeffs.variables, coeffs.levels());
    ShrinkageConfig config;
    config.q = a.q;
    config.sigma = a.sigma;
    const auto result = shrink_panel(coeffs, layout, config);

    for (std::size_t u = 0; u < coeffs.variables.size(); ++u) {
        apply_shrinkage(coeffs.values[u], coeffs.curves, result.per_variable[u]);
    }
    m.output("reduced.csv", coefficients_to_csv(coeffs, file.curve_ids));
    m.output("shrinkage.json", shrinkage_to_json(result, coeffs.variables));
    if (!a.outcome.empty()) {
        const auto y = parse_outcome_csv(load(m, a.outcome), file.curve_ids);
        const auto reduced = layout.restricted(result.kept_columns);
        m.output("design.csv", dataset_to_csv(design_matrix(reduced, coeffs, y)));
    }
    json summary = json::array();
    for (std::size_t u = 0; u < coeffs.variables.size(); ++u) {
        const auto& r = result.per_variable[u];
        summary.push_back({{"variable", coeffs.variables[u]},
                           {"threshold", r.threshold},
                           {"sigma_hat", r.sigma_hat},
                           {"kept_details", r.kept.size()}});
    }
    m.extra()["shrinkage"] = summary;
    m.write();
}

// ---------------------------------------------------------------------------

struct DesignInputs {
    std::string design;
    std::string panel;
    std::string coefficients;
    std::string outcome;
    std::string filter = "db4";
    std::optional<double> shrink_q;
    std::optional<double> sigma;
};

void add_design_inputs(CLI::App* cmd, DesignInputs& d) {
    cmd->add_option("--design", d.design, "Design CSV (feature columns, final column Y)");
    cmd->add_option("--panel", d.panel, "Curve panel CSV (curve_id,variable,t_index,value)");
    cmd->add_option("--coefficients", d.coefficients, "Coefficient CSV (curve_id,variable,level,position,value)");
    cmd->add_option("--outcome", d.outcome, "Outcome CSV (curve_id,Y) for --panel/--coefficients");
    cmd->add_option("--filter", d.filter, "Wavelet filter")->check(CLI::IsMember({"db2", "db4"}))->capture_default_str();
    cmd->add_option("--shrink-q", d.shrink_q, "Apply simultaneous shrinkage with this q before selection");
    cmd->add_option("--sigma", d.sigma, "Known noise level for shrinkage (default: MAD estimate)");
}

struct LoadedDesign {
    Dataset data;
    std::optional<CoefficientLayout> layout;
};

LoadedDesign load_design(Manifest& m, const DesignInputs& d) {
    const int sources = !d.design.empty() + !d.panel.empty() + !d.coefficients.empty();
    if (sources != 1) {
        throw CLI::ValidationError("exactly one of --design, --panel, --coefficients is required");
    }
    if (!d.design.empty()) {
        auto data = parse_dataset_csv(load(m, d.design));
        std::optional<CoefficientLayout> layout;
        try {
            layout = CoefficientLayout::from_column_names(data.names());
        } catch (const InvalidInput&) {
            // Plain tabular data: only column-level and JSON groupings apply.
        }
        return {std::move(data), std::move(layout)};
    }
    if (d.outcome.empty()) {
        throw CLI::ValidationError("--outcome is required with --panel or --coefficients");
    }
    CoefficientPanel coeffs;
    std::vector<std::int64_t> ids;
    const auto filter = WaveletFilter::from_name(d.filter);
    if (!d.panel.empty()) {
        auto file = parse_panel_csv(load(m, d.panel));
        coeffs = decompose(file.panel, filter);
        ids = std::move(file.curve_ids);
    } else {
        auto file = parse_coefficients_csv(load(m, d.coefficients));
        coeffs = std::move(file.coefficients);
        ids = std::move(file.curve_ids);
    }
    const auto y = parse_outcome_csv(load(m, d.outcome), ids);
    CoefficientLayout layout(coeffs.variables, coeffs.levels());
    if (d.shrink_q) {
        ShrinkageConfig config;
        config.q = *d.shrink_q;
        config.sigma = d.sigma;
        const auto result = shrink_panel(coeffs, layout, config);
        m.output("shrinkage.json", shrinkage_to_json(result, coeffs.variables));
        layout = layout.restricted(result.kept_columns);
    }
    return {design_matrix(layout, coeffs, y), layout};
}

GroupFamily load_family(Manifest& m, const std::string& groups_file, const std::string& scheme,
                        const LoadedDesign& design) {
    if (!groups_file.empty()) {
        return family_from_json(load(m, groups_file));
    }
    const auto s = parse_scheme(scheme);
    if (s == Scheme::by_column) {
        return column_family(design.data.names());
    }
    if (!design.layout) {
        throw InvalidInput("scheme '" + scheme +
                           "' needs wavelet column names (<var>:zeta, <var>:d<j>_<k>); use by_column or --groups");
    }
    return make_family(*design.layout, s);
}

struct SelectArgs {
    Common common;
    DesignInputs inputs;
    ForestOptions forest;
    std::string scheme = "by_variable";
    std::string groups;
    std::string method = "rfe";
    std::size_t runs = 1;
    double train_frac = 0.9;
    bool raw = false;
};

void run_select(const SelectArgs& a) {
    Manifest m("select", a.common.out);
    m.config() = {{"scheme", a.groups.empty() ? a.scheme : "json"},
                  {"method", a.method},
                  {"runs", a.runs},
                  {"train_frac", a.train_frac},
                  {"rescaled", !a.raw},
                  {"filter", a.inputs.filter},
                  {"forest", forest_json(a.forest)},
                  {"seed", a.common.seed}};
    if (a.inputs.shrink_q) {
        m.config()["shrink_q"] = *a.inputs.shrink_q;
    }
    const auto design = load_design(m, a.inputs);
    const auto family = load_family(m, a.groups, a.scheme, design);

    SelectionConfig config;
    config.forest = forest_config(a.forest, a.common);
    config.train_fraction = a.train_frac;
    config.runs = a.runs;
    config.seed = a.common.seed;
    config.use_rescaled = !a.raw;
    const auto method = a.method == "rfe" ? EliminationMethod::recursive : EliminationMethod::non_recursive;
    const auto report = repeat_selection(design.data, family, config, method);

    const auto& trace = report.traces.front();
    m.output("family.json", family_to_json(family));
    m.output("trace.csv", trace_to_csv(trace));
    m.output("trace_importance.csv", trace_importance_to_csv(trace));
    m.output("aggregate.csv", aggregate_groups_to_csv(report));
    m.output("curve.csv", aggregate_curve_to_csv(report));
    m.output("runs.csv", aggregate_runs_to_csv(report));

    json chosen = json::array();
    for (const auto g : choose_model(trace)) {
        chosen.push_back(family.groups[g].label);
    }
    json doc = {{"method", to_string(method)},
                {"chosen_step", trace.chosen_step},
                {"chosen_groups", chosen},
                {"mean_curve_size", report.chosen_size}};
    m.output("chosen.json", doc.dump(2) + "\n");
    m.write();
}

// ---------------------------------------------------------------------------

struct TimescanArgs {
    Common common;
    ForestOptions forest;
    std::string panel;
    std::string outcome;
    std::string filter = "db4";
    std::size_t points = 50;
    std::size_t replicates = 1;
};

void run_timescan(const TimescanArgs& a) {
    Manifest m("timescan", a.common.out);
    m.config() = {{"filter", a.filter},
                  {"points", a.points},
                  {"replicates", a.replicates},
                  {"forest", forest_json(a.forest)},
                  {"seed", a.common.seed}};
    const auto file = parse_panel_csv(load(m, a.panel));
    const auto y = parse_outcome_csv(load(m, a.outcome), file.curve_ids);
    TimeScanConfig config;
    config.forest = forest_config(a.forest, a.common);
    config.points = a.points;
    config.filter = a.filter;
    const auto scan = time_importance_scan(file.panel, y, a.replicates, config, a.common.seed);
    m.output("timescan.csv", timescan_to_csv(scan));
    m.write();
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    Common common;
    std::string design;
    std::size_t curves = 0;
    std::size_t p = 4;
    std::size_t replicates = 10;
};

const std::vector<std::string> kSimulationNames = {"exp1s1", "exp1s2", "exp2lin", "exp2log", "exp3", "b1a",
                                                   "b1b",    "b1c",    "b1d",     "b2a",     "b2b",  "b3"};

void emit_panel(Manifest& m, const SimulatedPanel& sim) {
    m.output("panel.csv", panel_to_csv(sim.panel));
    m.output("outcome.csv", outcome_to_csv(sim.outcome));
    m.extra()["ground_truth"] = {{"design", sim.design}, {"relevant", sim.relevant}};
}

void run_simulate(const SimulateArgs& a) {
    Manifest m("simulate", a.common.out);
    m.config() = {{"design", a.design}, {"curves", a.curves}, {"seed", a.common.seed}};
    const auto& name = a.design;
    const auto seed = a.common.seed;
    if (name == "exp1s1" || name == "exp1s2") {
        Experiment1Params p;
        if (a.curves) {
            p.curves = a.curves;
        }
        emit_panel(m, name == "exp1s1" ? experiment1_sim1(p, seed) : experiment1_sim2(p, seed));
    } else if (name == "exp2lin" || name == "exp2log") {
        Experiment2Params p;
        if (a.curves) {
            p.curves = a.curves;
        }
        p.link = name == "exp2lin" ? Link::linear : Link::logistic;
        emit_panel(m, experiment2(p, seed));
    } else if (name == "exp3") {
        Experiment3Params p;
        if (a.curves) {
            p.curves = a.curves;
        }
        p.replicates = a.replicates;
        m.config()["replicates"] = a.replicates;
        emit_panel(m, experiment3(p, seed));
    } else {
        const auto which = parse_appendix_b_case(name);
        const auto sim = appendix_b(which, a.p, a.curves ? a.curves : 1000, seed);
        m.config()["p"] = a.p;
        m.output("design.csv", dataset_to_csv(sim.data));
        m.extra()["ground_truth"] = {{"design", name},
                                     {"relevant", {"W"}},
                                     {"residual_variance", sim.residual_variance},
                                     {"variance_floored", sim.variance_floored},
                                     {"alpha", sim.alpha}};
    }
    m.write();
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
    Common common;
    std::string name;
    std::string scale = "desk";
    std::size_t curves = 0;
    std::size_t trees = 0;
    std::size_t runs = 0;
};

DeskScale scale_for(const ExperimentArgs& a) {
    DeskScale s;
    if (a.scale == "full") {
        s.curves = 1000;
        s.runs = 100;
        s.replicates = 10;
        s.scan_replicates = 100;
    }
    if (a.curves) {
        s.curves = a.curves;
    }
    if (a.trees) {
        s.trees = a.trees;
    }
    if (a.runs) {
        s.runs = a.runs;
        s.scan_replicates = a.runs;
    }
    s.threads = a.common.threads;
    return s;
}

void emit_selection(Manifest& m, const std::string& prefix, const AggregateReport& report) {
    m.output(prefix + "aggregate.csv", aggregate_groups_to_csv(report));
    m.output(prefix + "curve.csv", aggregate_curve_to_csv(report));
    m.output(prefix + "runs.csv", aggregate_runs_to_csv(report));
    m.output(prefix + "trace.csv", trace_to_csv(report.traces.front()));
    std::string step1 = "run,group,raw,rescaled\n";
    for (std::size_t r = 0; r < report.runs; ++r) {
        for (std::size_t g = 0; g < report.labels.size(); ++g) {
            step1 += std::to_string(r) + "," + report.labels[g] + "," + format_double(report.step1_raw[g][r]) + "," +
                     format_double(report.step1_rescaled[g][r]) + "\n";
        }
    }
    m.output(prefix + "step1_importance.csv", step1);
}

void run_experiment(const ExperimentArgs& a) {
    Manifest m("experiment", a.common.out);
    const auto s = scale_for(a);
    m.config() = {{"name", a.name},       {"scale", a.scale}, {"curves", s.curves},
                  {"trees", s.trees},     {"runs", s.runs},   {"replicates", s.replicates},
                  {"scan_replicates", s.scan_replicates},     {"seed", a.common.seed}};
    const auto seed = a.common.seed;
    const auto& name = a.name;
    if (name == "exp1s1" || name == "exp1s2") {
        const auto scan = run_experiment1(name == "exp1s1" ? 1 : 2, s, seed);
        m.output("timescan.csv", timescan_to_csv(scan));
        std::string rows = "replicate,argmax_t,argmax_sample\n";
        for (std::size_t r = 0; r < scan.replicates.size(); ++r) {
            const auto i = scan.argmax(r);
            rows += std::to_string(r) + "," + format_double(scan.times[i]) + "," +
                    std::to_string(scan.samples[i] + 1) + "\n";
        }
        m.output("argmax.csv", rows);
    } else if (name == "exp2lin" || name == "exp2log") {
        const auto link = name == "exp2lin" ? Link::linear : Link::logistic;
        emit_selection(m, "rfe_", run_experiment2(link, EliminationMethod::recursive, s, seed));
    } else if (name == "exp3") {
        emit_selection(m, "rfe_", run_experiment3(EliminationMethod::recursive, s, seed));
        emit_selection(m, "nrfe_", run_experiment3(EliminationMethod::non_recursive, s, seed));
    } else {
        const auto which = parse_appendix_b_case(name);
        const std::vector<std::size_t> sizes =
            a.scale == "full" ? std::vector<std::size_t>{1, 2, 4, 8, 16} : std::vector<std::size_t>{1, 2, 4, 8};
        const std::size_t replicates = a.runs ? a.runs : (a.scale == "full" ? 500 : 20);
        ForestConfig forest;
        forest.num_trees = s.trees;
        forest.threads = s.threads;
        const std::size_t n = a.curves ? a.curves : 1000;
        m.config()["sizes"] = sizes;
        m.config()["replicates"] = replicates;
        m.config()["curves"] = n;
        m.output("importance.csv",
                 group_versus_individual_to_csv(run_appendix_b(which, sizes, replicates, n, forest, seed)));
    }
    m.write();
}

// ---------------------------------------------------------------------------

struct FitArgs {
    Common common;
    ForestOptions forest;
    std::string design;
};

void run_fit(const FitArgs& a) {
    Manifest m("fit", a.common.out);
    m.config() = {{"forest", forest_json(a.forest)}, {"seed", a.common.seed}};
    const auto data = parse_dataset_csv(load(m, a.design));
    const auto forest = fit_forest(data, forest_config(a.forest, a.common));
    m.output("forest.json", forest_to_json(forest));
    m.output("predictions.csv", [&] {
        std::string out = "row,Y,prediction\n";
        const auto pred = forest.predict_all(data);
        for (std::size_t i = 0; i < pred.size(); ++i) {
            out += std::to_string(i) + "," + format_double(data.response()[i]) + "," + format_double(pred[i]) + "\n";
        }
        return out;
    }());
    m.write();
}

struct ImportanceArgs {
    Common common;
    std::string design;
    std::string forest;
    std::string groups;
    std::string scheme = "by_column";
    std::size_t repeats = 1;
};

void run_importance(const ImportanceArgs& a) {
    Manifest m("importance", a.common.out);
    m.config() = {{"scheme", a.groups.empty() ? a.scheme : "json"}, {"repeats", a.repeats}, {"seed", a.common.seed}};
    LoadedDesign design{parse_dataset_csv(load(m, a.design)), std::nullopt};
    try {
        design.layout = CoefficientLayout::from_column_names(design.data.names());
    } catch (const InvalidInput&) {
    }
    const auto forest = forest_from_json(load(m, a.forest));
    const auto family = load_family(m, a.groups, a.scheme, design);
    family.validate(design.data.cols());
    ImportanceOptions opts;
    opts.seed = a.common.seed;
    opts.repeats = a.repeats;
    opts.threads = a.common.threads;
    m.output("importance.csv", importance_to_csv(importance_table(forest, design.data, family, opts)));
    m.write();
}

const std::vector<std::string> kSchemes = {"by_variable", "by_level", "by_level_and_variable", "by_column"};

int run(int argc, char** argv) {
    CLI::App app{"Grouped permutation importance and wavelet-based selection of functional variables"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    DwtArgs dwt;
    auto* c_dwt = app.add_subcommand("dwt", "Wavelet coefficients of a curve panel");
    add_common(c_dwt, dwt.common);
    c_dwt->add_option("--panel", dwt.panel, "Curve panel CSV")->required();
    c_dwt->add_option("--filter", dwt.filter, "Wavelet filter")->check(CLI::IsMember({"db2", "db4"}))->capture_default_str();

    DwtArgs idwt;
    auto* c_idwt = app.add_subcommand("idwt", "Curves from wavelet coefficients");
    add_common(c_idwt, idwt.common);
    c_idwt->add_option("--coefficients", idwt.coefficients, "Coefficient CSV")->required();
    c_idwt->add_option("--filter", idwt.filter, "Wavelet filter")->check(CLI::IsMember({"db2", "db4"}))->capture_default_str();

    ShrinkArgs shrink;
    auto* c_shrink = app.add_subcommand("shrink", "Simultaneous hard thresholding of n decompositions");
    add_common(c_shrink, shrink.common);
    c_shrink->add_option("--coefficients", shrink.coefficients, "Coefficient CSV")->required();
    c_shrink->add_option("--outcome", shrink.outcome, "Outcome CSV; also writes the reduced design matrix");
    c_shrink->add_option("--q", shrink.q, "Probability budget for keeping a noise coefficient")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    c_shrink->add_option("--sigma", shrink.sigma, "Known noise level (default: MAD estimate)");

    SelectArgs select;
    auto* c_select = app.add_subcommand("select", "Grouped backward elimination (RFE or NRFE)");
    add_common(c_select, select.common);
    add_design_inputs(c_select, select.inputs);
    add_forest(c_select, select.forest);
    c_select->add_option("--scheme", select.scheme, "Grouping scheme")->check(CLI::IsMember(kSchemes))->capture_default_str();
    c_select->add_option("--groups", select.groups, "Group family JSON (overrides --scheme)");
    c_select->add_option("--method", select.method, "Elimination method")
        ->check(CLI::IsMember({"rfe", "nrfe"}))
        ->capture_default_str();
    c_select->add_option("--runs", select.runs, "Repeated train/validation splits")->check(CLI::PositiveNumber)->capture_default_str();
    c_select->add_option("--train-frac", select.train_frac, "Training fraction")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    c_select->add_flag("--raw", select.raw, "Rank by raw instead of size-rescaled importance");

    TimescanArgs timescan;
    auto* c_scan = app.add_subcommand("timescan", "Grouped importance of G(t) at equally spaced times");
    add_common(c_scan, timescan.common);
    add_forest(c_scan, timescan.forest);
    c_scan->add_option("--panel", timescan.panel, "Curve panel CSV")->required();
    c_scan->add_option("--outcome", timescan.outcome, "Outcome CSV")->required();
    c_scan->add_option("--filter", timescan.filter, "Wavelet filter")->check(CLI::IsMember({"db2", "db4"}))->capture_default_str();
    c_scan->add_option("--points", timescan.points, "Scan times")->check(CLI::PositiveNumber)->capture_default_str();
    c_scan->add_option("--replicates", timescan.replicates, "Forest refits")->check(CLI::PositiveNumber)->capture_default_str();

    SimulateArgs simulate;
    auto* c_sim = app.add_subcommand("simulate", "Write a simulated data set");
    add_common(c_sim, simulate.common);
    c_sim->add_option("--design", simulate.design, "Simulation design")->required()->check(CLI::IsMember(kSimulationNames));
    c_sim->add_option("--curves", simulate.curves, "Sample size (0 = design default)")->capture_default_str();
    c_sim->add_option("--p", simulate.p, "Size of W for the b* designs")->check(CLI::PositiveNumber)->capture_default_str();
    c_sim->add_option("--replicates", simulate.replicates, "Noisy copies of X1 and X2 (exp3)")->capture_default_str();

    ExperimentArgs experiment;
    auto* c_exp = app.add_subcommand("experiment", "Run a simulation experiment end to end");
    add_common(c_exp, experiment.common);
    c_exp->add_option("--name", experiment.name, "Experiment")->required()->check(CLI::IsMember(kSimulationNames));
    c_exp->add_option("--scale", experiment.scale, "desk or full")->check(CLI::IsMember({"desk", "full"}))->capture_default_str();
    c_exp->add_option("--curves", experiment.curves, "Override the sample size");
    c_exp->add_option("--trees", experiment.trees, "Override the number of trees");
    c_exp->add_option("--runs", experiment.runs, "Override runs / replicates");

    FitArgs fit;
    auto* c_fit = app.add_subcommand("fit", "Fit a random forest to a design CSV");
    add_common(c_fit, fit.common);
    add_forest(c_fit, fit.forest);
    c_fit->add_option("--design", fit.design, "Design CSV")->required();

    ImportanceArgs importance;
    auto* c_imp = app.add_subcommand("importance", "Grouped permutation importance of a fitted forest");
    add_common(c_imp, importance.common);
    c_imp->add_option("--design", importance.design, "Design CSV the forest was fitted on")->required();
    c_imp->add_option("--forest", importance.forest, "Forest JSON")->required();
    c_imp->add_option("--groups", importance.groups, "Group family JSON (overrides --scheme)");
    c_imp->add_option("--scheme", importance.scheme, "Grouping scheme")->check(CLI::IsMember(kSchemes))->capture_default_str();
    c_imp->add_option("--repeats", importance.repeats, "Permutations per tree")->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
        if (*c_dwt) {
            run_dwt(dwt);
        } else if (*c_idwt) {
            run_idwt(idwt);
        } else if (*c_shrink) {
            run_shrink(shrink);
        } else if (*c_select) {
            run_select(select);
        } else if (*c_scan) {
            run_timescan(timescan);
        } else if (*c_sim) {
            run_simulate(simulate);
        } else if (*c_exp) {
            run_experiment(experiment);
        } else if (*c_fit) {
            run_fit(fit);
        } else if (*c_imp) {
            run_importance(importance);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "wavesel: invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const NumericalError& e) {
        std::cerr << "wavesel: numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "wavesel: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}

} // namespace
} // namespace wavesel::cli

int main(int argc, char** argv) { return wavesel::cli::run(argc, argv); }
