#include "wavesel/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "wavesel/error.hpp"
#include "wavesel/importance.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

std::string to_string(Link link) {
    switch (link) {
    case Link::none:
        return "none";
    case Link::linear:
        return "linear";
    case Link::logistic:
        return "logistic";
    }
    return "none";
}

Link parse_link(std::string_view name) {
    if (name == "none") {
        return Link::none;
    }
    if (name == "linear" || name == "lin") {
        return Link::linear;
    }
    if (name == "logistic" || name == "log") {
        return Link::logistic;
    }
    throw InvalidInput("unknown link '" + std::string(name) + "'");
}

void GeneralDesign::validate() const {
    if (curves == 0) {
        throw InvalidInput("design needs at least one curve");
    }
    const auto levels = dyadic_levels(length);
    if (max_level >= levels) {
        throw InvalidInput("j* must be below the number of levels");
    }
    if (variables.empty()) {
        throw InvalidInput("design needs at least one variable");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidInput("sigma must be finite and non-negative");
    }
    if (!theta.empty() && theta.size() != length) {
        throw InvalidInput("theta must hold one value per coefficient");
    }
    if (WaveletFilter::from_name(filter).length() > length) {
        throw InvalidInput("curve length is shorter than the filter");
    }
}

double omega_scale(std::size_t level) { return std::exp(-(static_cast<double>(level) - 1.0)); }

namespace {

double apply_link(Link link, double theta, double z) {
    switch (link) {
    case Link::none:
        return 0.0;
    case Link::linear:
        return theta * z;
    case Link::logistic:
        return theta / (1.0 + std::exp(-z));
    }
    return 0.0;
}

// Level of wavelet-order index w >= 1.
std::size_t level_of(std::size_t w) { return static_cast<std::size_t>(std::bit_width(w)) - 1; }

CoefficientPanel simulate_coefficients(const GeneralDesign& design, const std::vector<std::vector<double>>& latent,
                                       std::uint64_t seed) {
    const std::size_t n = design.curves;
    const std::size_t N = design.length;
    const std::size_t active = std::size_t{2} << design.max_level; // wavelet-order indices 0..2^(j*+1)-1

    CoefficientPanel out;
    out.variables = design.variables;
    out.curves = n;
    out.length = N;
    out.values.resize(design.variables.size());

    for (std::size_t u = 0; u < design.variables.size(); ++u) {
        const auto& z = latent.size() == 1 ? latent.front() : latent[u];
        Rng omega_rng(derive_seed(seed, {1, u}));
        std::vector<double> omega(active);
        omega[0] = omega_rng.normal(3.0, 1.0);
        for (std::size_t w = 1; w < active; ++w) {
            omega[w] = omega_rng.normal(0.0, omega_scale(level_of(w)));
        }

        Rng noise(derive_seed(seed, {2, u}));
        auto& block = out.values[u];
        block.assign(n * N, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double* row = block.data() + i * N;
            for (std::size_t w = 0; w < active; ++w) {
                const double theta = design.theta.empty() ? 0.0 : design.theta[w];
                row[w] = omega[w] + apply_link(design.link, theta, z[i]) + design.sigma * noise.normal();
            }
        }
    }
    return out;
}

SimulatedPanel finish(CoefficientPanel coefficients, std::vector<double> outcome, const std::string& filter_name) {
    const auto filter = WaveletFilter::from_name(filter_name);
    SimulatedPanel sim;
    sim.panel = reconstruct(coefficients, filter);
    sim.coefficients = std::move(coefficients);
    sim.outcome = std::move(outcome);
    return sim;
}

std::vector<double> gaussian_outcome(std::size_t n, double variance, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> y(n);
    const double sd = std::sqrt(variance);
    for (auto& v : y) {
        v = rng.normal(0.0, sd);
    }
    return y;
}

} // namespace

SimulatedPanel simulate_general(const GeneralDesign& design, const std::vector<std::vector<double>>& latent,
                                std::vector<double> outcome, std::uint64_t seed) {
    design.validate();
    if (latent.size() != 1 && latent.size() != design.variables.size()) {
        throw InvalidInput("latent values must be shared or given per variable");
    }
    for (const auto& z : latent) {
        if (z.size() != design.curves) {
            throw InvalidInput("latent vector length differs from the number of curves");
        }
    }
    if (outcome.size() != design.curves) {
        throw InvalidInput("outcome length differs from the number of curves");
    }
    auto sim = finish(simulate_coefficients(design, latent, seed), std::move(outcome), design.filter);
    sim.design = "general";
    return sim;
}

SimulatedPanel simulate_general(const GeneralDesign& design, std::uint64_t seed, double outcome_variance) {
    design.validate();
    auto y = gaussian_outcome(design.curves, outcome_variance, derive_seed(seed, {0}));
    return simulate_general(design, {y}, y, seed);
}

namespace {

void check_interval(const Experiment1Params& p) {
    const auto levels = dyadic_levels(p.length);
    if (p.max_level >= levels) {
        throw InvalidInput("j* must be below the number of levels");
    }
    if (p.first < 2 || p.first > p.last || p.last > p.length) {
        throw InvalidInput("T* must satisfy 2 <= first <= last <= N");
    }
}

} // namespace

SimulatedPanel experiment1_sim1(const Experiment1Params& params, std::uint64_t seed) {
    check_interval(params);
    GeneralDesign design;
    design.curves = params.curves;
    design.length = params.length;
    design.sigma = params.sigma;
    design.max_level = params.max_level;
    design.link = Link::linear;
    design.theta.assign(params.length, 0.0);
    design.theta[0] = 1.0;

    const SupportTable table(WaveletFilter::from_name(design.filter), dyadic_levels(params.length));
    for (const auto& lp : table.on_samples(params.first - 1, params.last - 1)) {
        if (lp.level <= params.max_level) {
            design.theta[WaveletDecomposition::index(lp.level, lp.position)] = 1.0;
        }
    }
    auto y = gaussian_outcome(params.curves, params.outcome_variance, derive_seed(seed, {0}));
    auto sim = simulate_general(design, {y}, y, seed);
    sim.design = "exp1s1";
    sim.relevant = {"G([t" + std::to_string(params.first) + ",t" + std::to_string(params.last) + "])"};
    return sim;
}

double oscillation_outcome(std::span<const double> curve, std::size_t first, std::size_t last) {
    if (first < 2 || first > last || last > curve.size()) {
        throw InvalidInput("T* must satisfy 2 <= first <= last <= N");
    }
    double total = 0.0;
    for (std::size_t l = first; l <= last; ++l) {
        total += std::abs(curve[l - 1] - curve[l - 2]);
    }
    return 1000.0 / static_cast<double>(last - first + 1) * total;
}

SimulatedPanel experiment1_sim2(const Experiment1Params& params, std::uint64_t seed) {
    check_interval(params);
    GeneralDesign design;
    design.curves = params.curves;
    design.length = params.length;
    design.sigma = params.sigma;
    design.max_level = params.max_level;
    design.link = Link::none;

    const std::vector<double> unused(params.curves, 0.0);
    auto sim = simulate_general(design, {unused}, unused, seed);
    for (std::size_t i = 0; i < params.curves; ++i) {
        sim.outcome[i] = oscillation_outcome(sim.panel.curve(0, i), params.first, params.last);
    }
    sim.design = "exp1s2";
    sim.relevant = {"G([t" + std::to_string(params.first) + ",t" + std::to_string(params.last) + "])"};
    return sim;
}

SimulatedPanel experiment2(const Experiment2Params& params, std::uint64_t seed) {
    if (params.link == Link::none) {
        throw InvalidInput("experiment 2 needs a linear or logistic link");
    }
    GeneralDesign design;
    design.curves = params.curves;
    design.length = params.length;
    design.sigma = params.sigma;
    design.max_level = params.max_level;
    design.link = params.link;
    design.theta.assign(params.length, 0.0);
    design.theta[0] = params.theta_zeta;
    const auto levels = dyadic_levels(params.length);
    for (std::size_t j = 0; j < params.theta_levels.size() && j < levels && j <= params.max_level; ++j) {
        for (std::size_t k = 0; k < (std::size_t{1} << j); ++k) {
            design.theta[WaveletDecomposition::index(j, k)] = params.theta_levels[j];
        }
    }
    auto y = gaussian_outcome(params.curves, params.outcome_variance, derive_seed(seed, {0}));
    auto sim = simulate_general(design, {y}, y, seed);
    sim.design = params.link == Link::linear ? "exp2lin" : "exp2log";
    sim.relevant = {"G_zeta"};
    for (std::size_t j = 0; j < params.theta_levels.size() && j < levels; ++j) {
        if (params.theta_levels[j] != 0.0) {
            sim.relevant.push_back("G(" + std::to_string(j) + ")");
        }
    }
    return sim;
}

SimulatedPanel experiment3(const Experiment3Params& params, std::uint64_t seed) {
    if (params.variables < 2 || params.coefficients.size() > params.variables) {
        throw InvalidInput("experiment 3 needs at least 2 variables and no more coefficients than variables");
    }
    if (!(params.replicate_sigma >= 0.0)) {
        throw InvalidInput("replicate sigma must be non-negative");
    }
    const std::size_t n = params.curves;
    const std::size_t N = params.length;

    std::vector<std::vector<double>> z(params.variables, std::vector<double>(n));
    for (std::size_t u = 0; u < params.variables; ++u) {
        Rng rng(derive_seed(seed, {0, u}));
        for (auto& v : z[u]) {
            v = rng.normal();
        }
    }
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t u = 0; u < params.coefficients.size(); ++u) {
            y[i] += params.coefficients[u] * z[u][i];
        }
    }

    GeneralDesign design;
    design.curves = n;
    design.length = N;
    design.sigma = params.sigma;
    design.max_level = params.max_level;
    design.link = Link::linear;
    design.variables.clear();
    for (std::size_t u = 0; u < params.variables; ++u) {
        design.variables.push_back("X" + std::to_string(u + 1));
    }
    design.theta.assign(N, 0.0);
    std::fill(design.theta.begin(), design.theta.begin() + static_cast<std::ptrdiff_t>(std::size_t{2} << params.max_level),
              1.0);
    const auto base = simulate_coefficients(design, z, seed);

    CoefficientPanel all;
    all.curves = n;
    all.length = N;
    const std::size_t active = std::size_t{2} << params.max_level;
    for (std::size_t u = 0; u < params.variables; ++u) {
        all.variables.push_back(base.variables[u]);
        all.values.push_back(base.values[u]);
        if (u >= 2) {
            continue;
        }
        for (std::size_t v = 0; v < params.replicates; ++v) {
            Rng rng(derive_seed(seed, {3, u, v}));
            std::vector<double> block(n * N, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t w = 0; w < active; ++w) {
                    block[i * N + w] = base.values[u][i * N + w] + params.replicate_sigma * rng.normal();
                }
            }
            all.variables.push_back(base.variables[u] + "_" + std::to_string(v + 1));
            all.values.push_back(std::move(block));
        }
    }

    auto sim = finish(std::move(all), std::move(y), design.filter);
    sim.design = "exp3";
    for (std::size_t u = 0; u < params.coefficients.size(); ++u) {
        if (params.coefficients[u] != 0.0) {
            sim.relevant.push_back("X" + std::to_string(u + 1));
        }
    }
    return sim;
}

std::string to_string(AppendixBCase c) {
    switch (c) {
    case AppendixBCase::c1a:
        return "1a";
    case AppendixBCase::c1b:
        return "1b";
    case AppendixBCase::c1c:
        return "1c";
    case AppendixBCase::c1d:
        return "1d";
    case AppendixBCase::c2a:
        return "2a";
    case AppendixBCase::c2b:
        return "2b";
    case AppendixBCase::c3:
        return "3";
    }
    return "?";
}

AppendixBCase parse_appendix_b_case(std::string_view name) {
    if (!name.empty() && (name.front() == 'b' || name.front() == 'B')) {
        name.remove_prefix(1);
    }
    for (const auto c : {AppendixBCase::c1a, AppendixBCase::c1b, AppendixBCase::c1c, AppendixBCase::c1d,
                         AppendixBCase::c2a, AppendixBCase::c2b, AppendixBCase::c3}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw InvalidInput("unknown appendix case '" + std::string(name) + "'");
}

AppendixBData appendix_b(AppendixBCase which, std::size_t p, std::size_t n, std::uint64_t seed) {
    if (p == 0) {
        throw InvalidInput("p must be at least 1");
    }
    if (n < 2) {
        throw InvalidInput("need at least 2 rows");
    }
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    const bool correlated =
        which == AppendixBCase::c1b || which == AppendixBCase::c1d || which == AppendixBCase::c2b;
    MatrixXd cw = MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    if (correlated) {
        cw = 0.1 * cw + 0.9 * MatrixXd::Ones(cw.rows(), cw.cols());
    }
    const Eigen::LLT<MatrixXd> chol(cw);
    if (chol.info() != Eigen::Success) {
        throw NumericalError("covariance of W is not positive definite");
    }
    const MatrixXd lower = chol.matrixL();

    AppendixBData out;
    std::vector<double> alpha;
    const bool linear = which == AppendixBCase::c1a || which == AppendixBCase::c1b || which == AppendixBCase::c1c ||
                        which == AppendixBCase::c1d;
    if (linear) {
        VectorXd tau = VectorXd::Zero(cw.rows());
        if (which == AppendixBCase::c1a || which == AppendixBCase::c1b) {
            tau.setConstant(0.9);
        } else {
            tau(0) = 0.9;
        }
        const VectorXd a = chol.solve(tau);
        const double explained = tau.dot(a);
        out.residual_variance = 1.0 - explained;
        if (out.residual_variance < kResidualVarianceFloor) {
            out.residual_variance = kResidualVarianceFloor;
            out.variance_floored = true;
        }
        alpha.assign(a.data(), a.data() + a.size());
    }
    const double noise_sd = std::sqrt(out.residual_variance);

    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(which), p}));
    std::vector<double> columns(n * 2 * p);
    std::vector<double> y(n);
    VectorXd e(cw.rows());
    std::vector<double> w(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < e.size(); ++k) {
            e(k) = rng.normal();
        }
        const VectorXd wi = lower * e;
        for (std::size_t j = 0; j < p; ++j) {
            w[j] = wi(static_cast<Eigen::Index>(j));
            columns[j * n + i] = w[j];
        }
        for (std::size_t j = 0; j < p; ++j) {
            columns[(p + j) * n + i] = rng.normal();
        }

        double f = 0.0;
        switch (which) {
        case AppendixBCase::c1a:
        case AppendixBCase::c1b:
        case AppendixBCase::c1c:
        case AppendixBCase::c1d:
            for (std::size_t j = 0; j < p; ++j) {
                f += alpha[j] * w[j];
            }
            break;
        case AppendixBCase::c2a:
        case AppendixBCase::c2b:
            for (std::size_t j = 1; j <= p; ++j) {
                const double x = w[j - 1];
                const double jd = static_cast<double>(j);
                f += (jd < static_cast<double>(p) / 2.0 ? std::sin(2.0 * x) : std::cos(2.0 * x)) + jd;
            }
            break;
        case AppendixBCase::c3:
            for (std::size_t j = 0; j < p; ++j) {
                f += w[j];
            }
            f += w[p - 1] * w[0];
            for (std::size_t j = 0; j + 1 < p; ++j) {
                f += w[j] * w[j + 1];
            }
            break;
        }
        y[i] = f + noise_sd * rng.normal();
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) {
        names.push_back("W" + std::to_string(j + 1));
    }
    for (std::size_t j = 0; j < p; ++j) {
        names.push_back("Z" + std::to_string(j + 1));
    }
    out.data = Dataset(std::move(columns), std::move(y), std::move(names));
    out.alpha = std::move(alpha);
    out.w_group.label = "W";
    out.z_group.label = "Z";
    for (std::size_t j = 0; j < p; ++j) {
        out.w_group.columns.push_back(j);
        out.z_group.columns.push_back(p + j);
    }
    return out;
}

std::vector<std::size_t> scan_samples(std::size_t length, std::size_t points) {
    if (points == 0 || points > length) {
        throw InvalidInput("scan points must lie in [1, N]");
    }
    if (points == 1) {
        return {0};
    }
    std::vector<std::size_t> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = static_cast<std::size_t>(
            std::llround(static_cast<double>(i) * static_cast<double>(length - 1) / static_cast<double>(points - 1)));
    }
    return out;
}

std::vector<double> scan_importance(const CurvePanel& panel, const std::vector<double>& outcome,
                                    const TimeScanConfig& config, std::uint64_t seed) {
    const auto filter = WaveletFilter::from_name(config.filter);
    const auto coeffs = decompose(panel, filter);
    const CoefficientLayout layout(panel.variables, coeffs.levels());
    const Dataset data = design_matrix(layout, coeffs, outcome);
    const SupportTable table(filter, coeffs.levels());
    const auto samples = scan_samples(panel.samples, config.points);
    const auto family = time_family(layout, table, samples);

    ForestConfig forest = config.forest;
    forest.seed = derive_seed(seed, {0});
    const Forest model = fit_forest(data, forest);

    ImportanceOptions opts;
    opts.seed = derive_seed(seed, {1});
    opts.repeats = config.importance_repeats;
    opts.threads = config.forest.threads;
    std::vector<double> out;
    for (const auto& r : importance_table(model, data, family, opts)) {
        out.push_back(r.raw);
    }
    return out;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw InvalidInput("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::size_t TimeScan::argmax(std::size_t replicate) const {
    const auto& row = replicates.at(replicate);
    return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

TimeScan summarize_scan(std::vector<std::size_t> samples, std::size_t length,
                        std::vector<std::vector<double>> replicates) {
    if (replicates.empty()) {
        throw InvalidInput("time scan needs at least one replicate");
    }
    TimeScan scan;
    scan.samples = std::move(samples);
    for (const auto& r : replicates) {
        if (r.size() != scan.samples.size()) {
            throw InvalidInput("replicate length differs from the number of scan points");
        }
    }
    for (std::size_t i = 0; i < scan.samples.size(); ++i) {
        std::vector<double> column;
        for (const auto& r : replicates) {
            column.push_back(r[i]);
        }
        scan.times.push_back(sample_to_time(scan.samples[i], length));
        scan.mean.push_back(std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size()));
        scan.q25.push_back(quantile(column, 0.25));
        scan.q75.push_back(quantile(column, 0.75));
    }
    scan.replicates = std::move(replicates);
    return scan;
}

TimeScan time_importance_scan(const std::function<SimulatedPanel(std::uint64_t)>& generator, std::size_t replicates,
                              const TimeScanConfig& config, std::uint64_t seed) {
    if (replicates == 0) {
        throw InvalidInput("time scan needs at least one replicate");
    }
    std::vector<std::vector<double>> values;
    std::size_t length = 0;
    for (std::size_t r = 0; r < replicates; ++r) {
        const auto sim = generator(derive_seed(seed, {r}));
        length = sim.panel.samples;
        values.push_back(scan_importance(sim.panel, sim.outcome, config, derive_seed(seed, {r, 1})));
    }
    return summarize_scan(scan_samples(length, config.points), length, std::move(values));
}

TimeScan time_importance_scan(const CurvePanel& panel, const std::vector<double>& outcome, std::size_t replicates,
                              const TimeScanConfig& config, std::uint64_t seed) {
    std::vector<std::vector<double>> values;
    for (std::size_t r = 0; r < replicates; ++r) {
        values.push_back(scan_importance(panel, outcome, config, derive_seed(seed, {r, 1})));
    }
    return summarize_scan(scan_samples(panel.samples, config.points), panel.samples, std::move(values));
}

} // namespace wavesel
