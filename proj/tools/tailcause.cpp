// tailcause command-line interface.
//
// Exit codes: 0 success, 2 user/validation error, 1 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tailcause/error.hpp"
#include "tailcause/io.hpp"
#include "tailcause/seeding.hpp"

namespace tc = tailcause;
namespace tio = tailcause::io;
using tio::json;

namespace {

unsigned default_threads() {
    if (const char* env = std::getenv("HEAVYTAIL_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw tc::ConfigError("HEAVYTAIL_THREADS must be a positive integer");
    }
    return 1;
}

struct EstimatorFlags {
    std::string kind = "gamma";
    std::optional<long> k;
    double k_exponent = 0.4;

    void add(CLI::App* cmd) {
        cmd->add_option("--kind", kind, "Coefficient kind")->check(CLI::IsMember({"gamma", "psi"}));
        cmd->add_option("--k", k, "Explicit number of exceedances");
        cmd->add_option("--k-exponent", k_exponent, "k = floor(n^x) when --k is absent");
    }

    tc::EstimatorConfig config() const {
        tc::EstimatorConfig c;
        c.k = k;
        c.k_exponent = k_exponent;
        c.kind = tc::coef_kind_from_string(kind);
        return c;
    }

    json to_json() const {
        return json{{"kind", kind}, {"k", k ? json(*k) : json(nullptr)}, {"k_exponent", k_exponent}};
    }
};

void emit(const json& doc, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << doc.dump(2) << '\n';
    } else {
        tio::write_json_file(out, doc);
    }
}

// --- simulate -------------------------------------------------------------

struct SimulateCmd {
    std::string setting = "linear";
    int p = 4;
    std::size_t n = 1000;
    double alpha = 2.5;
    std::uint64_t seed = 1;
    std::string out;
    std::string truth;
    std::string scm_path;
    std::string coefficient_law = "intervals";
    bool positive = false;
    double nonlinear_quantile = 0.95;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("simulate", "Simulate data from a random (or given) heavy-tailed SCM");
        cmd->add_option("--setting", setting)->check(
            CLI::IsMember({"linear", "hidden_confounders", "nonlinear", "uniform_margins"}));
        cmd->add_option("--p", p, "Number of observed nodes");
        cmd->add_option("--n", n, "Number of observations");
        cmd->add_option("--alpha", alpha, "Tail index of the Student-t noise");
        cmd->add_option("--seed", seed);
        cmd->add_option("--out", out, "Data CSV")->required();
        cmd->add_option("--truth", truth, "Truth SCM JSON")->required();
        cmd->add_option("--scm", scm_path, "Use this SCM JSON instead of drawing one");
        cmd->add_option("--coefficient-law", coefficient_law)->check(CLI::IsMember({"intervals", "four_point"}));
        cmd->add_flag("--positive", positive, "Draw positive coefficients only");
        cmd->add_option("--nonlinear-quantile", nonlinear_quantile);
        cmd->callback([this] { run(); });
    }

    void run() const {
        const tc::SimSetting sim{tc::setting_kind_from_string(setting), nonlinear_quantile};
        sim.validate();
        tc::Scm scm;
        if (!scm_path.empty()) {
            scm = tio::scm_from_json(tio::read_json_file(scm_path));
        } else {
            tc::RandomScmConfig cfg;
            cfg.mode = positive ? tc::CoefficientMode::positive_coefficients : tc::CoefficientMode::real_coefficients;
            cfg.coefficient_law = tc::coefficient_law_from_string(coefficient_law);
            cfg.hidden_confounders = sim.kind == tc::SettingKind::hidden_confounders;
            scm = tc::random_scm(p, alpha, cfg, tc::derive_seed(seed, {0}));
        }
        const tc::Simulation result = tc::simulate(scm, sim, n, tc::derive_seed(seed, {1}));

        std::ofstream csv(out);
        if (!csv) throw tc::ValidationError("cannot write '" + out + "'");
        tio::write_csv(csv, result.data);

        json doc = tio::scm_to_json(result.truth);
        doc["meta"] = tio::make_meta(seed, json{{"command", "simulate"},
                                                {"setting", setting},
                                                {"p", p},
                                                {"n", n},
                                                {"alpha", alpha},
                                                {"scm", scm_path.empty() ? json(nullptr) : json(scm_path)},
                                                {"coefficient_law", coefficient_law},
                                                {"positive", positive},
                                                {"nonlinear_quantile", nonlinear_quantile}});
        tio::write_json_file(truth, doc);
    }
};

// --- coefficients -----------------------------------------------------------

struct CoefficientsCmd {
    std::string input;
    std::string out;
    EstimatorFlags est;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("coefficients", "Estimate the causal tail coefficient matrix of a CSV");
        cmd->add_option("--input", input, "Data CSV")->required();
        cmd->add_option("--out", out, "Matrix JSON (stdout when omitted)");
        est.add(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        const tc::Dataset data = tio::read_csv_file(input);
        const tc::EstimatorConfig cfg = est.config();
        const long k = tc::resolve_k(static_cast<long>(data.rows()), cfg);
        if (data.cols() < 2) throw tc::ValidationError("coefficients: need at least two columns");
        json doc = tio::matrix_to_json(tc::gamma_matrix(data, cfg), k);
        json config = est.to_json();
        config["command"] = "coefficients";
        config["input"] = input;
        doc["meta"] = tio::make_meta(std::nullopt, std::move(config));
        emit(doc, out);
    }
};

// --- discover ---------------------------------------------------------------

struct DiscoverCmd {
    std::string matrix;
    std::string input;
    std::string out;
    bool trace = false;
    EstimatorFlags est;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("discover", "Estimate a causal order with extremal ancestral search");
        auto* m = cmd->add_option("--matrix", matrix, "Coefficient matrix JSON");
        auto* i = cmd->add_option("--input", input, "Data CSV (coefficients estimated first)");
        m->excludes(i);
        cmd->add_option("--out", out, "Order JSON (stdout when omitted)");
        cmd->add_flag("--trace", trace, "Include per-step scores");
        est.add(cmd);
        cmd->callback([this] { run(); });
    }

    void run() const {
        tc::CoefMatrix coefs;
        json config{{"command", "discover"}};
        if (!matrix.empty()) {
            coefs = tio::matrix_from_json(tio::read_json_file(matrix));
            config["matrix"] = matrix;
        } else if (!input.empty()) {
            coefs = tc::gamma_matrix(tio::read_csv_file(input), est.config());
            config["input"] = input;
            config["estimator"] = est.to_json();
        } else {
            throw tc::ValidationError("discover: give --matrix or --input");
        }
        const auto steps = tc::ease_trace(coefs);
        std::vector<tc::Node> sequence;
        for (const auto& s : steps) sequence.push_back(s.chosen);
        json doc = tio::order_to_json({coefs.names, tc::CausalOrder::from_sequence(sequence)});
        if (trace) {
            json t = json::array();
            for (const auto& s : steps) {
                json remaining = json::array();
                for (tc::Node v : s.remaining) remaining.push_back(coefs.names[static_cast<std::size_t>(v)]);
                t.push_back(json{{"remaining", remaining},
                                 {"scores", s.scores},
                                 {"chosen", coefs.names[static_cast<std::size_t>(s.chosen)]}});
            }
            doc["trace"] = std::move(t);
        }
        doc["meta"] = tio::make_meta(std::nullopt, std::move(config));
        emit(doc, out);
    }
};

// --- oracle -----------------------------------------------------------------

struct OracleCmd {
    std::string scm_path;
    std::string kind = "gamma";
    std::string out;
    bool all_nodes = false;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("oracle", "Population coefficient matrix of an SCM");
        cmd->add_option("--scm", scm_path, "SCM JSON")->required();
        cmd->add_option("--kind", kind)->check(CLI::IsMember({"gamma", "psi"}));
        cmd->add_option("--out", out, "Matrix JSON (stdout when omitted)");
        cmd->add_flag("--all-nodes", all_nodes, "Keep hidden nodes in the matrix");
        cmd->callback([this] { run(); });
    }

    void run() const {
        const tc::Scm scm = tio::scm_from_json(tio::read_json_file(scm_path));
        tc::CoefMatrix coefs =
            tc::coef_kind_from_string(kind) == tc::CoefKind::gamma ? tc::gamma_population(scm) : tc::psi_population(scm);
        if (!all_nodes) coefs = tc::restrict_to(coefs, scm.observed());
        json doc = tio::matrix_to_json(coefs);
        doc["meta"] = tio::make_meta(std::nullopt, json{{"command", "oracle"},
                                                        {"scm", scm_path},
                                                        {"kind", kind},
                                                        {"all_nodes", all_nodes}});
        emit(doc, out);
    }
};

// --- evaluate ---------------------------------------------------------------

struct EvaluateCmd {
    std::string order;
    std::string truth;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("evaluate", "Score an order against a truth SCM (ancestral violations)");
        cmd->add_option("--order", order, "Order JSON")->required();
        cmd->add_option("--truth", truth, "Truth SCM JSON")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const tc::Scm scm = tio::scm_from_json(tio::read_json_file(truth));
        const tio::NamedOrder named = tio::order_from_json(tio::read_json_file(order));
        json doc = tio::score_to_json(tc::score_order(scm, tio::order_for_truth(named, scm)));
        doc["meta"] = tio::make_meta(std::nullopt, json{{"command", "evaluate"}, {"order", order}, {"truth", truth}});
        std::cout << doc.dump() << '\n';
    }
};

// --- benchmark --------------------------------------------------------------

struct BenchmarkCmd {
    std::string grid;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> k_exponent;
    std::vector<std::string> methods;
    std::string out;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("benchmark", "Run a simulation grid and score every method");
        cmd->add_option("--grid", grid, "Grid JSON")->required();
        cmd->add_option("--reps", reps, "Replicates per grid cell (default: grid file, else 50)");
        cmd->add_option("--seed", seed, "Master seed (default: grid file, else 1)");
        cmd->add_option("--threads", threads, "Worker threads (default: HEAVYTAIL_THREADS, else 1)");
        cmd->add_option("--k-exponent", k_exponent);
        cmd->add_option("--methods", methods)->check(CLI::IsMember({"ease_gamma", "ease_psi", "random_order"}));
        cmd->add_option("--out", out, "Results CSV")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        const tio::GridFile file = tio::grid_from_json(tio::read_json_file(grid));
        tc::BenchmarkConfig cfg;
        cfg.grid = file.grid;
        cfg.reps = reps.value_or(file.reps.value_or(50));
        cfg.seed = seed.value_or(file.seed.value_or(1));
        cfg.k_exponent = k_exponent.value_or(file.k_exponent.value_or(0.4));
        cfg.threads = threads.value_or(default_threads());
        if (!methods.empty()) {
            cfg.methods.clear();
            for (const auto& m : methods) cfg.methods.push_back(tc::method_from_string(m));
        } else if (!file.methods.empty()) {
            cfg.methods = file.methods;
        }
        const auto rows = tc::benchmark(cfg);

        std::ofstream csv(out);
        if (!csv) throw tc::ValidationError("cannot write '" + out + "'");
        tio::write_benchmark_csv(csv, rows);

        json method_names = json::array();
        for (auto m : cfg.methods) method_names.push_back(tc::to_string(m));
        json meta = tio::make_meta(cfg.seed, json{{"command", "benchmark"},
                                                  {"grid", tio::grid_to_json(cfg.grid)},
                                                  {"reps", cfg.reps},
                                                  {"k_exponent", cfg.k_exponent},
                                                  {"methods", method_names},
                                                  {"threads", cfg.threads}});
        tio::write_json_file(out + ".meta.json", json{{"metric", tc::kOrderMetric}, {"meta", meta}});
        std::cerr << "metric: " << tc::kOrderMetric << "; " << rows.size() << " rows written to " << out << '\n';
    }
};

// --- k-sensitivity ----------------------------------------------------------

struct KSensitivityCmd {
    std::string grid;
    std::string input;
    std::vector<double> exponents{0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    std::string kind = "psi";
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("k-sensitivity", "Sweep k = floor(n^x) over exponents x");
        auto* g = cmd->add_option("--grid", grid, "Grid JSON (simulation sweep)");
        auto* i = cmd->add_option("--input", input, "Data CSV (coefficient sweep)");
        g->excludes(i);
        cmd->add_option("--exponents", exponents)->delimiter(',');
        cmd->add_option("--kind", kind)->check(CLI::IsMember({"gamma", "psi"}));
        cmd->add_option("--reps", reps);
        cmd->add_option("--seed", seed);
        cmd->add_option("--threads", threads);
        cmd->add_option("--out", out, "Results CSV")->required();
        cmd->callback([this] { run(); });
    }

    void run() const {
        std::ofstream csv(out);
        if (!csv) throw tc::ValidationError("cannot write '" + out + "'");
        if (!grid.empty()) {
            const tio::GridFile file = tio::grid_from_json(tio::read_json_file(grid));
            tc::KSensitivityConfig cfg;
            cfg.grid = file.grid;
            cfg.exponents = exponents;
            cfg.reps = reps.value_or(file.reps.value_or(20));
            cfg.seed = seed.value_or(file.seed.value_or(1));
            cfg.kind = tc::coef_kind_from_string(kind);
            cfg.threads = threads.value_or(default_threads());
            tio::write_k_sensitivity_csv(csv, tc::k_sensitivity(cfg));
        } else if (!input.empty()) {
            const tc::Dataset data = tio::read_csv_file(input);
            const auto rows = tc::k_sensitivity(data, exponents, tc::coef_kind_from_string(kind));
            csv << "exponent,k,from,to,value\n";
            for (const auto& r : rows)
                for (int a = 0; a < r.coefs.size(); ++a)
                    for (int b = 0; b < r.coefs.size(); ++b)
                        if (a != b)
                            csv << tio::format_double(r.exponent) << ',' << r.k << ',' << data.names[static_cast<std::size_t>(a)]
                                << ',' << data.names[static_cast<std::size_t>(b)] << ','
                                << tio::format_double(r.coefs(a, b)) << '\n';
        } else {
            throw tc::ValidationError("k-sensitivity: give --grid or --input");
        }
        std::cerr << "metric: " << tc::kOrderMetric << '\n';
    }
};

// --- tail-index -------------------------------------------------------------

struct TailIndexCmd {
    std::string input;
    std::string column;
    std::size_t k = 0;
    std::string tail = "upper";

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("tail-index", "Hill estimate of a column's tail index");
        cmd->add_option("--input", input, "Data CSV")->required();
        cmd->add_option("--column", column, "Column name or 0-based index")->required();
        cmd->add_option("--k", k, "Number of upper order statistics")->required();
        cmd->add_option("--tail", tail)->check(CLI::IsMember({"upper", "lower"}));
        cmd->callback([this] { run(); });
    }

    void run() const {
        const tc::Dataset data = tio::read_csv_file(input);
        int j = -1;
        const auto it = std::find(data.names.begin(), data.names.end(), column);
        if (it != data.names.end()) {
            j = static_cast<int>(it - data.names.begin());
        } else {
            try {
                std::size_t used = 0;
                j = std::stoi(column, &used);
                if (used != column.size()) j = -1;
            } catch (const std::exception&) {
                j = -1;
            }
        }
        if (j < 0 || j >= data.cols()) throw tc::ValidationError("tail-index: unknown column '" + column + "'");
        std::vector<double> values(static_cast<std::size_t>(data.rows()));
        for (Eigen::Index i = 0; i < data.rows(); ++i)
            values[static_cast<std::size_t>(i)] = tail == "lower" ? -data.values(i, j) : data.values(i, j);
        const tc::TailIndexEstimate est = tc::hill_tail_index(values, k);
        json doc{{"alpha_hat", est.alpha_hat}, {"xi_hat", est.xi_hat}, {"k", k}};
        doc["meta"] = tio::make_meta(std::nullopt, json{{"command", "tail-index"},
                                                        {"input", input},
                                                        {"column", data.names[static_cast<std::size_t>(j)]},
                                                        {"tail", tail}});
        std::cout << doc.dump() << '\n';
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal discovery from extremes of heavy-tailed linear SCMs"};
    app.set_version_flag("--version", std::string(tio::kVersion));
    app.require_subcommand(1);

    SimulateCmd simulate;
    CoefficientsCmd coefficients;
    DiscoverCmd discover;
    OracleCmd oracle;
    EvaluateCmd evaluate;
    BenchmarkCmd bench;
    KSensitivityCmd ksens;
    TailIndexCmd tail_index;
    simulate.add(app);
    coefficients.add(app);
    discover.add(app);
    oracle.add(app);
    evaluate.add(app);
    bench.add(app);
    ksens.add(app);
    tail_index.add(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const tc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
