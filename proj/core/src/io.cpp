#include "wavesel/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <system_error>
#include <unordered_map>

#include <json.hpp>

#include "wavesel/error.hpp"

namespace wavesel {

using nlohmann::json;

std::string format_double(double value) {
    if (value == 0.0) {
        return "0"; // folds -0
    }
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        throw NumericalError("cannot format number");
    }
    return std::string(buf, end);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw InvalidInput("not a finite number: '" + std::string(text) + "'");
    }
    return value;
}

namespace {

std::int64_t parse_int(std::string_view text) {
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidInput("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

// Calls `row` for every non-empty line with its fields. Quoted fields are unescaped into
// `scratch`, so views stay valid only during the callback.
void for_each_row(std::string_view text, const std::function<void(std::size_t line, std::span<const std::string_view>)>& row) {
    std::vector<std::string_view> fields;
    std::vector<std::string> scratch;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    if (text.starts_with("\xEF\xBB\xBF")) {
        pos = 3;
    }
    while (pos < text.size()) {
        ++line_no;
        fields.clear();
        scratch.clear();
        bool any = false;
        while (true) {
            if (pos < text.size() && text[pos] == '"') {
                std::string value;
                ++pos;
                while (true) {
                    if (pos >= text.size()) {
                        throw InvalidInput("line " + std::to_string(line_no) + ": unterminated quote");
                    }
                    if (text[pos] == '"') {
                        if (pos + 1 < text.size() && text[pos + 1] == '"') {
                            value.push_back('"');
                            pos += 2;
                            continue;
                        }
                        ++pos;
                        break;
                    }
                    value.push_back(text[pos++]);
                }
                scratch.push_back(std::move(value));
                fields.emplace_back();
                any = true;
            } else {
                const auto start = pos;
                while (pos < text.size() && text[pos] != ',' && text[pos] != '\n') {
                    ++pos;
                }
                auto field = text.substr(start, pos - start);
                if (!field.empty() && field.back() == '\r') {
                    field.remove_suffix(1);
                }
                any = any || !field.empty();
                fields.push_back(field);
            }
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == '\r') {
                ++pos;
            }
            if (pos < text.size() && text[pos] == '\n') {
                ++pos;
            }
            break;
        }
        if (!any && fields.size() == 1) {
            continue; // blank line
        }
        // Point quoted placeholders at their unescaped text.
        std::size_t q = 0;
        for (auto& f : fields) {
            if (f.data() == nullptr) {
                f = scratch[q++];
            }
        }
        row(line_no, fields);
    }
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out += c;
        }
    }
    out += '"';
    return out;
}

template <class... Fields>
void append_row(std::string& out, const Fields&... fields) {
    bool first = true;
    ((out += (first ? "" : ","), out += fields, first = false), ...);
    out += '\n';
}

void check_header(const std::vector<std::string>& actual, std::initializer_list<std::string_view> expected,
                  std::string_view what) {
    if (actual.size() != expected.size() || !std::equal(actual.begin(), actual.end(), expected.begin())) {
        std::string want;
        for (const auto e : expected) {
            want += (want.empty() ? "" : ",") + std::string(e);
        }
        throw InvalidInput(std::string(what) + " header must be: " + want);
    }
}

std::vector<std::string> read_header(std::string_view text, std::size_t& body_start) {
    const auto nl = text.find('\n');
    const auto first = text.substr(0, nl);
    std::vector<std::string> header;
    for_each_row(first, [&](std::size_t, std::span<const std::string_view> f) { header.assign(f.begin(), f.end()); });
    if (header.empty()) {
        throw InvalidInput("empty file");
    }
    body_start = nl == std::string_view::npos ? text.size() : nl + 1;
    return header;
}

} // namespace

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw InvalidInput("missing column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    bool have_header = false;
    for_each_row(text, [&](std::size_t line, std::span<const std::string_view> fields) {
        if (!have_header) {
            table.header.assign(fields.begin(), fields.end());
            have_header = true;
            return;
        }
        if (fields.size() != table.header.size()) {
            throw InvalidInput("line " + std::to_string(line) + ": expected " + std::to_string(table.header.size()) +
                               " fields, found " + std::to_string(fields.size()));
        }
        table.rows.emplace_back(fields.begin(), fields.end());
    });
    if (!have_header) {
        throw InvalidInput("empty file");
    }
    return table;
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    const auto write = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += csv_field(row[i]);
        }
        out += '\n';
    };
    write(table.header);
    for (const auto& r : table.rows) {
        write(r);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw Error("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at '" + path.string() + "'");
    }
}

namespace {

struct LongRecord {
    std::int64_t curve;
    std::size_t variable;
    std::size_t index;
    double value;
};

std::vector<std::int64_t> sorted_ids(const std::vector<LongRecord>& records) {
    std::vector<std::int64_t> ids;
    for (const auto& r : records) {
        ids.push_back(r.curve);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<std::int64_t> default_ids(std::size_t n, const std::vector<std::int64_t>& ids) {
    if (!ids.empty()) {
        if (ids.size() != n) {
            throw InvalidInput("curve id count differs from the number of curves");
        }
        return ids;
    }
    std::vector<std::int64_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::int64_t>(i);
    }
    return out;
}

} // namespace

PanelFile parse_panel_csv(std::string_view text) {
    std::size_t body = 0;
    check_header(read_header(text, body), {"curve_id", "variable", "t_index", "value"}, "panel");

    std::vector<std::string> variables;
    std::unordered_map<std::string, std::size_t> var_index;
    std::vector<LongRecord> records;
    std::size_t max_t = 0;
    for_each_row(text.substr(body), [&](std::size_t line, std::span<const std::string_view> f) {
        if (f.size() != 4) {
            throw InvalidInput("panel line " + std::to_string(line + 1) + ": expected 4 fields");
        }
        const std::string name(f[1]);
        auto it = var_index.find(name);
        if (it == var_index.end()) {
            it = var_index.emplace(name, variables.size()).first;
            variables.push_back(name);
        }
        const auto t = parse_int(f[2]);
        if (t < 1) {
            throw InvalidInput("panel line " + std::to_string(line + 1) + ": t_index must start at 1");
        }
        records.push_back({parse_int(f[0]), it->second, static_cast<std::size_t>(t - 1), parse_double(f[3])});
        max_t = std::max(max_t, static_cast<std::size_t>(t));
    });
    if (records.empty()) {
        throw InvalidInput("panel has no rows");
    }

    PanelFile out;
    out.curve_ids = sorted_ids(records);
    const std::size_t n = out.curve_ids.size();
    out.panel = CurvePanel(variables, n, max_t);
    std::vector<std::vector<char>> seen(variables.size(), std::vector<char>(n * max_t, 0));
    for (const auto& r : records) {
        const auto i = static_cast<std::size_t>(
            std::lower_bound(out.curve_ids.begin(), out.curve_ids.end(), r.curve) - out.curve_ids.begin());
        auto& flag = seen[r.variable][i * max_t + r.index];
        if (flag) {
            throw InvalidInput("duplicate panel entry for curve " + std::to_string(r.curve));
        }
        flag = 1;
        out.panel.values[r.variable][i * max_t + r.index] = r.value;
    }
    if (records.size() != variables.size() * n * max_t) {
        throw InvalidInput("ragged panel: every curve needs every variable at t_index 1.." + std::to_string(max_t));
    }
    return out;
}

std::string panel_to_csv(const CurvePanel& panel, const std::vector<std::int64_t>& curve_ids) {
    const auto ids = default_ids(panel.curves, curve_ids);
    std::string out = "curve_id,variable,t_index,value\n";
    for (std::size_t i = 0; i < panel.curves; ++i) {
        const auto id = std::to_string(ids[i]);
        for (std::size_t u = 0; u < panel.variables.size(); ++u) {
            const auto name = csv_field(panel.variables[u]);
            const auto c = panel.curve(u, i);
            for (std::size_t l = 0; l < panel.samples; ++l) {
                append_row(out, id, name, std::to_string(l + 1), format_double(c[l]));
            }
        }
    }
    return out;
}

std::vector<double> parse_outcome_csv(std::string_view text, const std::vector<std::int64_t>& curve_ids) {
    const auto table = parse_csv(text);
    check_header(table.header, {"curve_id", "Y"}, "outcome");
    std::map<std::int64_t, double> by_id;
    for (const auto& row : table.rows) {
        if (!by_id.emplace(parse_int(row[0]), parse_double(row[1])).second) {
            throw InvalidInput("duplicate outcome for curve " + row[0]);
        }
    }
    std::vector<double> y;
    for (const auto id : curve_ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw InvalidInput("no outcome for curve " + std::to_string(id));
        }
        y.push_back(it->second);
    }
    return y;
}

std::string outcome_to_csv(const std::vector<double>& outcome, const std::vector<std::int64_t>& curve_ids) {
    const auto ids = default_ids(outcome.size(), curve_ids);
    std::string out = "curve_id,Y\n";
    for (std::size_t i = 0; i < outcome.size(); ++i) {
        append_row(out, std::to_string(ids[i]), format_double(outcome[i]));
    }
    return out;
}

CoefficientFile parse_coefficients_csv(std::string_view text) {
    std::size_t body = 0;
    check_header(read_header(text, body), {"curve_id", "variable", "level", "position", "value"}, "coefficient");

    std::vector<std::string> variables;
    std::unordered_map<std::string, std::size_t> var_index;
    std::vector<LongRecord> records;
    std::size_t max_index = 0;
    for_each_row(text.substr(body), [&](std::size_t line, std::span<const std::string_view> f) {
        if (f.size() != 5) {
            throw InvalidInput("coefficient line " + std::to_string(line + 1) + ": expected 5 fields");
        }
        const std::string name(f[1]);
        auto it = var_index.find(name);
        if (it == var_index.end()) {
            it = var_index.emplace(name, variables.size()).first;
            variables.push_back(name);
        }
        const auto level = parse_int(f[2]);
        const auto position = parse_int(f[3]);
        std::size_t index = 0;
        if (level == -1) {
            if (position != 0) {
                throw InvalidInput("scaling coefficient must have position 0");
            }
        } else if (level >= 0 && level < 62 && position >= 0 && position < (std::int64_t{1} << level)) {
            index = WaveletDecomposition::index(static_cast<std::size_t>(level), static_cast<std::size_t>(position));
        } else {
            throw InvalidInput("coefficient line " + std::to_string(line + 1) + ": invalid (level, position)");
        }
        records.push_back({parse_int(f[0]), it->second, index, parse_double(f[4])});
        max_index = std::max(max_index, index);
    });
    if (records.empty()) {
        throw InvalidInput("coefficient file has no rows");
    }

    CoefficientFile out;
    out.curve_ids = sorted_ids(records);
    const std::size_t n = out.curve_ids.size();
    const std::size_t N = std::bit_ceil(max_index + 1);
    dyadic_levels(N);
    out.coefficients.variables = variables;
    out.coefficients.curves = n;
    out.coefficients.length = N;
    out.coefficients.values.assign(variables.size(), std::vector<double>(n * N, 0.0));
    std::vector<std::vector<char>> seen(variables.size(), std::vector<char>(n * N, 0));
    for (const auto& r : records) {
        const auto i = static_cast<std::size_t>(
            std::lower_bound(out.curve_ids.begin(), out.curve_ids.end(), r.curve) - out.curve_ids.begin());
        auto& flag = seen[r.variable][i * N + r.index];
        if (flag) {
            throw InvalidInput("duplicate coefficient for curve " + std::to_string(r.curve));
        }
        flag = 1;
        out.coefficients.values[r.variable][i * N + r.index] = r.value;
    }
    if (records.size() != variables.size() * n * N) {
        throw InvalidInput("ragged coefficient file: every curve needs all " + std::to_string(N) +
                           " coefficients of every variable");
    }
    return out;
}

std::string coefficients_to_csv(const CoefficientPanel& coefficients, const std::vector<std::int64_t>& curve_ids) {
    const auto ids = default_ids(coefficients.curves, curve_ids);
    const std::size_t N = coefficients.length;
    std::string out = "curve_id,variable,level,position,value\n";
    for (std::size_t i = 0; i < coefficients.curves; ++i) {
        const auto id = std::to_string(ids[i]);
        for (std::size_t u = 0; u < coefficients.variables.size(); ++u) {
            const auto name = csv_field(coefficients.variables[u]);
            const auto row = coefficients.row(u, i);
            append_row(out, id, name, std::string("-1"), std::string("0"), format_double(row[0]));
            for (std::size_t w = 1; w < N; ++w) {
                const auto j = static_cast<std::size_t>(std::bit_width(w)) - 1;
                const auto k = w - (std::size_t{1} << j);
                append_row(out, id, name, std::to_string(j), std::to_string(k), format_double(row[w]));
            }
        }
    }
    return out;
}

Dataset parse_dataset_csv(std::string_view text) {
    std::size_t body = 0;
    auto header = read_header(text, body);
    if (header.size() < 2 || header.back() != "Y") {
        throw InvalidInput("dataset needs at least one feature and a final column named Y");
    }
    const std::size_t p = header.size() - 1;
    std::vector<std::vector<double>> columns(p);
    std::vector<double> y;
    for_each_row(text.substr(body), [&](std::size_t line, std::span<const std::string_view> f) {
        if (f.size() != header.size()) {
            throw InvalidInput("dataset line " + std::to_string(line + 1) + ": expected " +
                               std::to_string(header.size()) + " fields");
        }
        for (std::size_t j = 0; j < p; ++j) {
            columns[j].push_back(parse_double(f[j]));
        }
        y.push_back(parse_double(f[p]));
    });
    header.pop_back();
    return Dataset::from_columns(columns, std::move(y), std::move(header));
}

std::string dataset_to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        out += csv_field(data.name(j));
        out += ',';
    }
    out += "Y\n";
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            out += format_double(data.at(i, j));
            out += ',';
        }
        out += format_double(data.response()[i]);
        out += '\n';
    }
    return out;
}

namespace {

constexpr int kForestFormatVersion = 1;

} // namespace

std::string forest_to_json(const Forest& forest) {
    json doc;
    doc["format"] = "wavesel-forest";
    doc["version"] = kForestFormatVersion;
    const auto& c = forest.config();
    doc["config"] = {{"num_trees", c.num_trees},
                     {"mtry", c.mtry},
                     {"min_leaf_size", c.min_leaf_size},
                     {"seed", c.seed}};
    doc["num_features"] = forest.num_features();
    json trees = json::array();
    for (const auto& tree : forest.trees()) {
        std::vector<std::int32_t> feature;
        std::vector<double> value;
        std::vector<std::uint32_t> left;
        std::vector<std::uint32_t> right;
        for (const auto& node : tree.nodes()) {
            feature.push_back(node.feature);
            value.push_back(node.value);
            left.push_back(node.left);
            right.push_back(node.right);
        }
        trees.push_back({{"feature", feature},
                         {"value", value},
                         {"left", left},
                         {"right", right},
                         {"bootstrap", tree.bootstrap()},
                         {"oob", tree.oob()}});
    }
    doc["trees"] = std::move(trees);
    return doc.dump() + "\n";
}

Forest forest_from_json(std::string_view text) {
    try {
        const auto doc = json::parse(text);
        if (doc.at("format") != "wavesel-forest") {
            throw InvalidInput("not a forest document");
        }
        if (doc.at("version").get<int>() != kForestFormatVersion) {
            throw InvalidInput("unsupported forest format version");
        }
        ForestConfig config;
        const auto& c = doc.at("config");
        config.num_trees = c.at("num_trees").get<std::size_t>();
        config.mtry = c.at("mtry").get<std::size_t>();
        config.min_leaf_size = c.at("min_leaf_size").get<std::size_t>();
        config.seed = c.at("seed").get<std::uint64_t>();
        std::vector<Tree> trees;
        for (const auto& t : doc.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<std::int32_t>>();
            const auto value = t.at("value").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<std::uint32_t>>();
            const auto right = t.at("right").get<std::vector<std::uint32_t>>();
            if (value.size() != feature.size() || left.size() != feature.size() || right.size() != feature.size()) {
                throw InvalidInput("node arrays differ in length");
            }
            std::vector<Tree::Node> nodes(feature.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                nodes[i] = {feature[i], value[i], left[i], right[i]};
            }
            trees.emplace_back(std::move(nodes), t.at("bootstrap").get<std::vector<RowIndex>>(),
                               t.at("oob").get<std::vector<RowIndex>>());
        }
        return Forest(config, doc.at("num_features").get<std::size_t>(), std::move(trees));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed forest document: ") + e.what());
    }
}

std::string family_to_json(const GroupFamily& family) {
    json doc;
    doc["partition"] = family.partition;
    json groups = json::array();
    for (const auto& g : family.groups) {
        groups.push_back({{"label", g.label}, {"columns", g.columns}});
    }
    doc["groups"] = std::move(groups);
    return doc.dump(2) + "\n";
}

GroupFamily family_from_json(std::string_view text) {
    try {
        const auto doc = json::parse(text);
        GroupFamily family;
        family.partition = doc.value("partition", false);
        for (const auto& g : doc.at("groups")) {
            family.groups.push_back({g.at("label").get<std::string>(), g.at("columns").get<std::vector<std::size_t>>()});
        }
        return family;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed group family: ") + e.what());
    }
}

std::string importance_to_csv(const std::vector<ImportanceReport>& reports) {
    std::string out = "group,size,raw,rescaled,trees_used\n";
    for (const auto& r : reports) {
        append_row(out, csv_field(r.target), std::to_string(r.size), format_double(r.raw), format_double(r.rescaled),
                   std::to_string(r.trees_used));
    }
    return out;
}

std::string trace_to_csv(const SelectionTrace& trace) {
    std::string out = "step,groups,validation_mse,eliminated,chosen\n";
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const auto& step = trace.steps[s];
        append_row(out, std::to_string(s), std::to_string(step.active.size()), format_double(step.validation_mse),
                   csv_field(trace.labels[step.eliminated]), std::string(s == trace.chosen_step ? "1" : "0"));
    }
    return out;
}

std::string trace_importance_to_csv(const SelectionTrace& trace) {
    std::string out = "step,group,size,raw,rescaled,trees_used\n";
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        for (const auto& r : trace.steps[s].importances) {
            append_row(out, std::to_string(s), csv_field(r.target), std::to_string(r.size), format_double(r.raw),
                       format_double(r.rescaled), std::to_string(r.trees_used));
        }
    }
    return out;
}

std::string aggregate_groups_to_csv(const AggregateReport& report) {
    std::string out = "group,size,selected,frequency,step1_raw_mean,step1_rescaled_mean\n";
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (const auto x : v) {
            s += x;
        }
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    for (std::size_t g = 0; g < report.labels.size(); ++g) {
        append_row(out, csv_field(report.labels[g]), std::to_string(report.group_sizes[g]),
                   std::to_string(report.selection_count[g]), format_double(report.frequency(g)),
                   format_double(mean(report.step1_raw[g])), format_double(mean(report.step1_rescaled[g])));
    }
    return out;
}

std::string aggregate_curve_to_csv(const AggregateReport& report) {
    std::string out = "groups,mean_mse,chosen\n";
    for (std::size_t k = 1; k <= report.mean_mse.size(); ++k) {
        append_row(out, std::to_string(k), format_double(report.mean_mse[k - 1]),
                   std::string(k == report.chosen_size ? "1" : "0"));
    }
    return out;
}

std::string aggregate_runs_to_csv(const AggregateReport& report) {
    std::string out = "run,chosen_groups";
    for (const auto& label : report.labels) {
        out += ',';
        out += csv_field(label);
    }
    out += '\n';
    for (std::size_t r = 0; r < report.traces.size(); ++r) {
        const auto& trace = report.traces[r];
        const auto& chosen = trace.steps[trace.chosen_step].active;
        out += std::to_string(r) + ',' + std::to_string(chosen.size());
        for (std::size_t g = 0; g < report.labels.size(); ++g) {
            out += std::find(chosen.begin(), chosen.end(), g) != chosen.end() ? ",1" : ",0";
        }
        out += '\n';
    }
    return out;
}

std::string timescan_to_csv(const TimeScan& scan) {
    std::string out = "t,sample,mean,q25,q75\n";
    for (std::size_t i = 0; i < scan.samples.size(); ++i) {
        append_row(out, format_double(scan.times[i]), std::to_string(scan.samples[i] + 1), format_double(scan.mean[i]),
                   format_double(scan.q25[i]), format_double(scan.q75[i]));
    }
    return out;
}

std::string group_versus_individual_to_csv(const std::vector<GroupVersusIndividual>& rows) {
    std::string out = "p,replicate,grouped,rescaled,sum_individual\n";
    for (const auto& r : rows) {
        append_row(out, std::to_string(r.p), std::to_string(r.replicate), format_double(r.grouped),
                   format_double(r.rescaled), format_double(r.sum_individual));
    }
    return out;
}

std::string shrinkage_to_json(const PanelShrinkage& shrinkage, const std::vector<std::string>& variables) {
    json doc = json::array();
    for (std::size_t u = 0; u < shrinkage.per_variable.size(); ++u) {
        const auto& r = shrinkage.per_variable[u];
        json kept = json::array();
        for (const auto& lp : r.kept) {
            kept.push_back("d" + std::to_string(lp.level) + "_" + std::to_string(lp.position));
        }
        doc.push_back({{"variable", variables.at(u)},
                       {"threshold", r.threshold},
                       {"sigma_hat", r.sigma_hat},
                       {"q", r.q},
                       {"kept", std::move(kept)}});
    }
    return doc.dump(2) + "\n";
}

} // namespace wavesel
