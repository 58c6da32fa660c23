#include "tailcause/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "tailcause/error.hpp"

namespace tailcause::io {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view field, std::size_t line_no) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw ValidationError("csv line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) +
                              "' as a number");
    return value;
}

}  // namespace

Dataset read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ValidationError("csv: missing header row");
    for (auto f : split_commas(line)) names.emplace_back(trim(f));

    std::vector<double> flat;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != names.size())
            throw ValidationError("csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(names.size()) + " fields, found " + std::to_string(fields.size()));
        for (auto f : fields) flat.push_back(parse_double(f, line_no));
        ++rows;
    }
    if (rows == 0) throw ValidationError("csv: no data rows");
    const auto p = static_cast<Eigen::Index>(names.size());
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), p);
    for (std::size_t r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < p; ++c)
            values(static_cast<Eigen::Index>(r), c) = flat[r * names.size() + static_cast<std::size_t>(c)];
    return Dataset(std::move(names), std::move(values));
}

Dataset read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t c = 0; c < data.names.size(); ++c) out << (c ? "," : "") << data.names[c];
    out << '\n';
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << format_double(data.values(r, c));
        out << '\n';
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

json make_meta(std::optional<std::uint64_t> seed, json config) {
    json meta;
    meta["version"] = kVersion;
    meta["seed"] = seed ? json(*seed) : json(nullptr);
    meta["config"] = std::move(config);
    return meta;
}

namespace {

// Rethrows JSON access failures as validation errors.
template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

json noise_to_json(const NoiseSpec& s) {
    return json{{"family", to_string(s.family)}, {"scale_upper", s.scale_upper}, {"scale_lower", s.scale_lower}};
}

NoiseSpec noise_from_json(const json& j, double alpha) {
    NoiseSpec s;
    s.alpha = alpha;
    s.family = noise_family_from_string(j.value("family", std::string("student_t")));
    s.scale_upper = j.value("scale_upper", 1.0);
    s.scale_lower = j.value("scale_lower", s.family == NoiseFamily::student_t ? s.scale_upper : 1.0);
    return s;
}

}  // namespace

json scm_to_json(const Scm& scm) {
    json doc;
    doc["p"] = scm.size();
    doc["names"] = scm.names();
    json edges = json::array();
    for (const auto& e : scm.weighted_edges()) edges.push_back(json::array({e.parent, e.child, e.beta}));
    doc["edges"] = std::move(edges);
    doc["alpha"] = scm.alpha();
    doc["mode"] = to_string(scm.mode());
    const auto& noise = scm.noise();
    const bool uniform = std::all_of(noise.begin(), noise.end(), [&](const NoiseSpec& s) { return s == noise.front(); });
    doc["noise"] = noise_to_json(noise.front());
    if (!uniform) {
        json per = json::array();
        for (const auto& s : noise) per.push_back(noise_to_json(s));
        doc["noise_per_node"] = std::move(per);
    }
    doc["hidden"] = scm.hidden();
    return doc;
}

Scm scm_from_json(const json& doc) {
    return guarded("scm json", [&] {
        const int p = doc.at("p").get<int>();
        const double alpha = doc.at("alpha").get<double>();
        std::vector<WeightedEdge> edges;
        bool any_negative = false;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 3) throw ValidationError("scm json: edges must be [parent, child, beta]");
            edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
            any_negative = any_negative || edges.back().beta < 0.0;
        }
        const CoefficientMode mode =
            doc.contains("mode") ? coefficient_mode_from_string(doc["mode"].get<std::string>())
                                 : (any_negative ? CoefficientMode::real_coefficients
                                                 : CoefficientMode::positive_coefficients);
        const NoiseSpec base = noise_from_json(doc.value("noise", json::object()), alpha);
        std::vector<NoiseSpec> noise(static_cast<std::size_t>(std::max(p, 0)), base);
        if (doc.contains("noise_per_node")) {
            const auto& per = doc["noise_per_node"];
            if (per.size() != noise.size()) throw ValidationError("scm json: noise_per_node needs one entry per node");
            for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = noise_from_json(per[i], alpha);
        }
        std::vector<Node> hidden = doc.value("hidden", std::vector<Node>{});
        std::vector<std::string> names = doc.value("names", std::vector<std::string>{});
        return Scm(p, std::move(edges), std::move(noise), mode, std::move(hidden), std::move(names));
    });
}

json matrix_to_json(const CoefMatrix& coefs, std::optional<long> k) {
    json doc;
    doc["kind"] = to_string(coefs.kind);
    std::vector<std::string> names = coefs.names;
    if (names.empty())
        for (int i = 0; i < coefs.size(); ++i) names.push_back("X" + std::to_string(i + 1));
    doc["names"] = names;
    json values = json::array();
    for (int i = 0; i < coefs.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < coefs.size(); ++j) row.push_back(i == j ? json(nullptr) : json(coefs(i, j)));
        values.push_back(std::move(row));
    }
    doc["values"] = std::move(values);
    if (k) doc["k"] = *k;
    return doc;
}

CoefMatrix matrix_from_json(const json& doc) {
    return guarded("matrix json", [&] {
        CoefMatrix out;
        out.kind = coef_kind_from_string(doc.value("kind", std::string("gamma")));
        out.names = doc.at("names").get<std::vector<std::string>>();
        const auto& values = doc.at("values");
        const auto p = static_cast<Eigen::Index>(out.names.size());
        if (p < 1 || values.size() != out.names.size())
            throw ValidationError("matrix json: values must be a square matrix matching names");
        out.values = Eigen::MatrixXd::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
        for (Eigen::Index i = 0; i < p; ++i) {
            const auto& row = values[static_cast<std::size_t>(i)];
            if (row.size() != out.names.size()) throw ValidationError("matrix json: ragged values row");
            for (Eigen::Index j = 0; j < p; ++j) {
                if (i == j) continue;
                const auto& v = row[static_cast<std::size_t>(j)];
                // Non-numeric off-diagonal entries read as NaN; ease rejects them.
                out.values(i, j) = v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
            }
        }
        return out;
    });
}

json order_to_json(const NamedOrder& order) {
    json doc;
    doc["names"] = order.names;
    std::vector<int> pi;
    for (int r : order.order.positions()) pi.push_back(r + 1);
    doc["pi"] = pi;
    json inverse = json::array();
    for (Node i : order.order.sequence()) inverse.push_back(order.names[static_cast<std::size_t>(i)]);
    doc["pi_inverse"] = std::move(inverse);
    return doc;
}

NamedOrder order_from_json(const json& doc) {
    return guarded("order json", [&] {
        const auto inverse = doc.at("pi_inverse").get<std::vector<std::string>>();
        std::vector<std::string> names = doc.value("names", inverse);
        if (names.size() != inverse.size()) throw ValidationError("order json: names and pi_inverse differ in size");
        std::vector<Node> sequence;
        for (const auto& nm : inverse) {
            const auto it = std::find(names.begin(), names.end(), nm);
            if (it == names.end()) throw ValidationError("order json: unknown node '" + nm + "'");
            sequence.push_back(static_cast<Node>(it - names.begin()));
        }
        return NamedOrder{std::move(names), CausalOrder::from_sequence(sequence)};
    });
}

CausalOrder order_for_truth(const NamedOrder& order, const Scm& truth) {
    const std::vector<Node> observed = truth.observed();
    if (observed.size() != order.names.size())
        throw ValidationError("order covers " + std::to_string(order.names.size()) + " nodes, truth has " +
                              std::to_string(observed.size()) + " observed nodes");
    std::vector<int> positions;
    for (Node j : observed) {
        const auto& nm = truth.names()[static_cast<std::size_t>(j)];
        const auto it = std::find(order.names.begin(), order.names.end(), nm);
        if (it == order.names.end()) throw ValidationError("order has no node named '" + nm + "'");
        positions.push_back(order.order.position(static_cast<Node>(it - order.names.begin())));
    }
    return CausalOrder::from_positions(std::move(positions));
}

json score_to_json(const OrderScore& score) {
    json doc;
    doc["valid"] = score.valid;
    doc["violations"] = score.violations;
    doc["violation_fraction"] = score.violation_fraction;
    doc["ancestral_pairs"] = score.ancestral_pairs;
    doc["metric"] = kOrderMetric;
    return doc;
}

GridFile grid_from_json(const json& doc) {
    return guarded("grid json", [&] {
        if (!doc.is_object()) throw ValidationError("grid json: expected an object");
        GridFile out;
        out.grid.ns = doc.at("n").get<std::vector<std::size_t>>();
        out.grid.ps = doc.at("p").get<std::vector<int>>();
        out.grid.alphas = doc.at("alpha").get<std::vector<double>>();
        for (const auto& s : doc.value("settings", std::vector<std::string>{"linear"}))
            out.grid.settings.push_back(setting_kind_from_string(s));
        out.grid.nonlinear_quantile = doc.value("nonlinear_quantile", 0.95);
        if (doc.contains("coefficient_law"))
            out.grid.scm_config.coefficient_law = coefficient_law_from_string(doc["coefficient_law"].get<std::string>());
        if (doc.contains("mode")) out.grid.scm_config.mode = coefficient_mode_from_string(doc["mode"].get<std::string>());
        if (doc.contains("memory_cap_bytes")) out.grid.memory_cap_bytes = doc["memory_cap_bytes"].get<std::size_t>();
        if (doc.contains("reps")) out.reps = doc["reps"].get<std::size_t>();
        if (doc.contains("seed")) out.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("k_exponent")) out.k_exponent = doc["k_exponent"].get<double>();
        for (const auto& m : doc.value("methods", std::vector<std::string>{})) out.methods.push_back(method_from_string(m));
        out.grid.validate();
        return out;
    });
}

json grid_to_json(const SimGrid& grid) {
    json doc;
    doc["n"] = grid.ns;
    doc["p"] = grid.ps;
    doc["alpha"] = grid.alphas;
    json settings = json::array();
    for (auto s : grid.settings) settings.push_back(to_string(s));
    doc["settings"] = std::move(settings);
    doc["nonlinear_quantile"] = grid.nonlinear_quantile;
    doc["coefficient_law"] = to_string(grid.scm_config.coefficient_law);
    doc["mode"] = to_string(grid.scm_config.mode);
    return doc;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "scenario_id,setting,n,p,alpha,method,mean_violation_fraction,se,mistake_rate,wall_ms\n";
    for (const auto& r : rows)
        out << r.scenario_id << ',' << to_string(r.setting) << ',' << r.n << ',' << r.p << ',' << format_double(r.alpha)
            << ',' << to_string(r.method) << ',' << format_double(r.mean_violation_fraction) << ','
            << format_double(r.se) << ',' << format_double(r.mistake_rate) << ',' << format_double(r.wall_ms) << '\n';
}

void write_k_sensitivity_csv(std::ostream& out, const std::vector<KSensitivityRow>& rows) {
    out << "scenario_id,setting,n,p,alpha,exponent,k,mean_violation_fraction,se,mistake_rate\n";
    for (const auto& r : rows)
        out << r.scenario_id << ',' << to_string(r.setting) << ',' << r.n << ',' << r.p << ',' << format_double(r.alpha)
            << ',' << format_double(r.exponent) << ',' << r.k << ',' << format_double(r.mean_violation_fraction) << ','
            << format_double(r.se) << ',' << format_double(r.mistake_rate) << '\n';
}

}  // namespace tailcause::io
