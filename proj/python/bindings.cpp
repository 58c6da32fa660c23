#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "tailcause/error.hpp"
#include "tailcause/io.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
namespace tc = tailcause;

namespace {

tc::CoefMatrix to_coefs(const Eigen::MatrixXd& values, const std::string& kind,
                        std::vector<std::string> names = {}) {
    tc::CoefMatrix m;
    m.values = values;
    m.kind = tc::coef_kind_from_string(kind);
    m.names = std::move(names);
    return m;
}

tc::Dataset to_dataset(const Eigen::MatrixXd& values, std::vector<std::string> names) {
    if (names.empty())
        for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back("X" + std::to_string(j + 1));
    return tc::Dataset(std::move(names), values);
}

tc::EstimatorConfig to_config(const std::string& kind, std::optional<long> k, double k_exponent) {
    tc::EstimatorConfig c;
    c.kind = tc::coef_kind_from_string(kind);
    c.k = k;
    c.k_exponent = k_exponent;
    return c;
}

tc::Dag dag_of(int p, const std::vector<std::pair<int, int>>& edges) { return tc::Dag(p, edges); }

}  // namespace

PYBIND11_MODULE(_tailcause, m) {
    m.doc() = "Causal tail coefficients, their rank estimators and extremal ancestral search";

    py::register_exception<tc::Error>(m, "TailcauseError", PyExc_ValueError);

    py::class_<tc::Scm>(m, "Scm")
        .def_property_readonly("p", &tc::Scm::size)
        .def_property_readonly("alpha", &tc::Scm::alpha)
        .def_property_readonly("names", &tc::Scm::names)
        .def_property_readonly("hidden", &tc::Scm::hidden)
        .def_property_readonly("observed", &tc::Scm::observed)
        .def_property_readonly("coefficients", &tc::Scm::coefficients)
        .def_property_readonly("mode", [](const tc::Scm& s) { return std::string(tc::to_string(s.mode())); })
        .def_property_readonly("edges",
                               [](const tc::Scm& s) {
                                   std::vector<std::tuple<int, int, double>> out;
                                   for (const auto& e : s.weighted_edges()) out.emplace_back(e.parent, e.child, e.beta);
                                   return out;
                               })
        .def("to_json", [](const tc::Scm& s) { return tc::io::scm_to_json(s).dump(); })
        .def_static("from_json", [](const std::string& text) { return tc::io::scm_from_json(tc::io::json::parse(text)); })
        .def_static(
            "from_edges",
            [](int p, const std::vector<std::tuple<int, int, double>>& edges, double alpha, const std::string& family,
               std::vector<int> hidden) {
                std::vector<tc::WeightedEdge> we;
                bool negative = false;
                for (const auto& [a, b, beta] : edges) {
                    we.push_back({a, b, beta});
                    negative = negative || beta < 0.0;
                }
                std::vector<tc::NoiseSpec> noise(static_cast<std::size_t>(std::max(p, 0)),
                                                 tc::NoiseSpec{tc::noise_family_from_string(family), alpha, 1.0, 1.0});
                return tc::Scm(p, std::move(we), std::move(noise),
                               negative ? tc::CoefficientMode::real_coefficients
                                        : tc::CoefficientMode::positive_coefficients,
                               std::move(hidden));
            },
            py::arg("p"), py::arg("edges"), py::arg("alpha") = 1.0, py::arg("family") = "student_t",
            py::arg("hidden") = std::vector<int>{});

    m.def(
        "sample_noise",
        [](const std::string& family, double alpha, std::size_t n, std::uint64_t seed, double upper, double lower) {
            return tc::sample_noise({tc::noise_family_from_string(family), alpha, upper, lower}, n, seed);
        },
        py::arg("family"), py::arg("alpha"), py::arg("n"), py::arg("seed"), py::arg("scale_upper") = 1.0,
        py::arg("scale_lower") = 1.0);
    m.def(
        "hill_tail_index",
        [](const std::vector<double>& data, std::size_t k) {
            const auto est = tc::hill_tail_index(data, k);
            return py::dict(py::arg("alpha_hat") = est.alpha_hat, py::arg("xi_hat") = est.xi_hat);
        },
        py::arg("data"), py::arg("k"));
    m.def("max_sum_tail_ratio", &tc::max_sum_tail_ratio, py::arg("samples"), py::arg("quantile_level"));

    m.def(
        "random_scm",
        [](int p, double alpha, std::uint64_t seed, bool positive, bool hidden_confounders,
           const std::string& coefficient_law) {
            tc::RandomScmConfig cfg;
            cfg.mode = positive ? tc::CoefficientMode::positive_coefficients : tc::CoefficientMode::real_coefficients;
            cfg.hidden_confounders = hidden_confounders;
            cfg.coefficient_law = tc::coefficient_law_from_string(coefficient_law);
            return tc::random_scm(p, alpha, cfg, seed);
        },
        py::arg("p"), py::arg("alpha"), py::arg("seed"), py::arg("positive") = false,
        py::arg("hidden_confounders") = false, py::arg("coefficient_law") = "intervals");
    m.def("path_weights", &tc::path_weights, py::arg("scm"));
    m.def(
        "ancestors", [](int p, const std::vector<std::pair<int, int>>& edges, int j) { return tc::ancestors(dag_of(p, edges), j); },
        py::arg("p"), py::arg("edges"), py::arg("j"));
    m.def(
        "all_causal_orders",
        [](int p, const std::vector<std::pair<int, int>>& edges) {
            std::vector<std::vector<int>> out;
            for (const auto& o : tc::all_causal_orders(dag_of(p, edges))) out.push_back(o.sequence());
            return out;
        },
        py::arg("p"), py::arg("edges"));
    m.def(
        "validate_order",
        [](int p, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& sequence) {
            const auto v = tc::validate_order(dag_of(p, edges), tc::CausalOrder::from_sequence(sequence));
            return py::make_tuple(v.valid, v.violations);
        },
        py::arg("p"), py::arg("edges"), py::arg("sequence"));

    m.def("gamma_population", [](const tc::Scm& s) { return tc::gamma_population(s).values; }, py::arg("scm"));
    m.def("psi_population", [](const tc::Scm& s) { return tc::psi_population(s).values; }, py::arg("scm"));
    m.def(
        "classify_pair",
        [](const Eigen::MatrixXd& coefs, int i, int j, double tol) {
            return std::string(tc::to_string(tc::classify_pair(to_coefs(coefs, "gamma"), i, j, tol)));
        },
        py::arg("coefs"), py::arg("i"), py::arg("j"), py::arg("tol") = 1e-9);
    m.def("mistake_bound_margin", &tc::mistake_bound_margin, py::arg("scm"));

    m.def(
        "resolve_k",
        [](long n, std::optional<long> k, double k_exponent) { return tc::resolve_k(n, to_config("gamma", k, k_exponent)); },
        py::arg("n"), py::arg("k") = py::none(), py::arg("k_exponent") = 0.4);
    m.def(
        "gamma_matrix",
        [](const Eigen::MatrixXd& data, const std::string& kind, std::optional<long> k, double k_exponent) {
            return tc::gamma_matrix(to_dataset(data, {}), to_config(kind, k, k_exponent)).values;
        },
        py::arg("data"), py::arg("kind") = "gamma", py::arg("k") = py::none(), py::arg("k_exponent") = 0.4);
    m.def(
        "gamma_estimate",
        [](const Eigen::MatrixXd& data, int j, int k_col, std::optional<long> k, double k_exponent) {
            return tc::gamma_estimate(to_dataset(data, {}), j, k_col, to_config("gamma", k, k_exponent));
        },
        py::arg("data"), py::arg("j"), py::arg("k_col"), py::arg("k") = py::none(), py::arg("k_exponent") = 0.4);
    m.def(
        "psi_estimate",
        [](const Eigen::MatrixXd& data, int j, int k_col, std::optional<long> k, double k_exponent) {
            return tc::psi_estimate(to_dataset(data, {}), j, k_col, to_config("psi", k, k_exponent));
        },
        py::arg("data"), py::arg("j"), py::arg("k_col"), py::arg("k") = py::none(), py::arg("k_exponent") = 0.4);

    m.def(
        "ease", [](const Eigen::MatrixXd& coefs) { return tc::ease(to_coefs(coefs, "gamma")).sequence(); },
        py::arg("coefs"), "Causal order as a node sequence (pi inverse).");
    m.def(
        "ease_trace",
        [](const Eigen::MatrixXd& coefs) {
            py::list out;
            for (const auto& s : tc::ease_trace(to_coefs(coefs, "gamma")))
                out.append(py::dict(py::arg("remaining") = s.remaining, py::arg("scores") = s.scores,
                                    py::arg("chosen") = s.chosen));
            return out;
        },
        py::arg("coefs"));

    m.def(
        "simulate",
        [](const tc::Scm& scm, const std::string& setting, std::size_t n, std::uint64_t seed, double q) {
            auto sim = tc::simulate(scm, {tc::setting_kind_from_string(setting), q}, n, seed);
            return py::make_tuple(sim.data.values, sim.data.names);
        },
        py::arg("scm"), py::arg("setting"), py::arg("n"), py::arg("seed"), py::arg("nonlinear_quantile") = 0.95);
    m.def(
        "score_order",
        [](const tc::Scm& truth, const std::vector<int>& sequence) {
            const auto s = tc::score_order(truth, tc::CausalOrder::from_sequence(sequence));
            return py::dict(py::arg("valid") = s.valid, py::arg("violations") = s.violations,
                            py::arg("violation_fraction") = s.violation_fraction,
                            py::arg("ancestral_pairs") = s.ancestral_pairs);
        },
        py::arg("truth"), py::arg("sequence"));
    m.def(
        "benchmark",
        [](const std::string& grid_json, std::size_t reps, std::uint64_t seed, unsigned threads) {
            const auto file = tc::io::grid_from_json(tc::io::json::parse(grid_json));
            tc::BenchmarkConfig cfg;
            cfg.grid = file.grid;
            cfg.reps = reps;
            cfg.seed = seed;
            cfg.threads = threads;
            if (file.k_exponent) cfg.k_exponent = *file.k_exponent;
            if (!file.methods.empty()) cfg.methods = file.methods;
            py::list out;
            for (const auto& r : tc::benchmark(cfg))
                out.append(py::dict(py::arg("scenario_id") = r.scenario_id,
                                    py::arg("setting") = std::string(tc::to_string(r.setting)), py::arg("n") = r.n,
                                    py::arg("p") = r.p, py::arg("alpha") = r.alpha,
                                    py::arg("method") = std::string(tc::to_string(r.method)),
                                    py::arg("mean_violation_fraction") = r.mean_violation_fraction, py::arg("se") = r.se,
                                    py::arg("mistake_rate") = r.mistake_rate, py::arg("wall_ms") = r.wall_ms));
            return out;
        },
        py::arg("grid_json"), py::arg("reps"), py::arg("seed") = 1, py::arg("threads") = 1);

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
