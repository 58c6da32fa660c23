// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "tailcause/ease.hpp"
#include "tailcause/evaluation.hpp"
#include "tailcause/io.hpp"
#include "tailcause/seeding.hpp"

using namespace tailcause;
namespace tio = tailcause::io;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream s;
    s << std::setprecision(digits) << x;
    return s.str();
}

std::string capture(const std::string& cmd, int& code) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        code = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

SimGrid linear_grid(std::vector<std::size_t> ns, std::vector<int> ps, std::vector<double> alphas,
                    std::vector<SettingKind> settings = {SettingKind::linear}) {
    SimGrid g;
    g.ns = std::move(ns);
    g.ps = std::move(ps);
    g.alphas = std::move(alphas);
    g.settings = std::move(settings);
    return g;
}

Dataset pair_dataset(const Eigen::MatrixXd& v) { return Dataset({"X1", "X2"}, v); }

// ---------------------------------------------------------------------------

Outcome financial_fixture() {
    int code = 0;
    const std::string out = capture(std::string(TAILCAUSE_CLI) + " discover --matrix " + TAILCAUSE_SOURCE_DIR +
                                        "/fixtures/financial_psi.json",
                                    code);
    if (code != 0) return {false, "discover exited with " + std::to_string(code)};
    const auto doc = tio::json::parse(out);
    const auto expect = tio::json::array({"EURCHF", "NOVN", "ROG", "NESN"});
    return {doc["pi_inverse"] == expect, "pi_inverse = " + doc["pi_inverse"].dump()};
}

Outcome oracle_correctness() {
    RandomScmConfig cfg;
    cfg.mode = CoefficientMode::positive_coefficients;
    const std::array<double, 3> alphas{1.0, 1.5, 2.5};
    std::size_t pairs = 0, agree = 0, scms = 0, valid = 0;
    for (std::uint64_t s = 0; s < 500; ++s) {
        const int p = 2 + static_cast<int>(s % 7);
        const double alpha = alphas[(s / 7) % 3];
        const Scm scm = random_scm(p, alpha, cfg, derive_seed(2024, {s}));
        const auto g = gamma_population(scm);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                if (i == j) continue;
                ++pairs;
                agree += classify_pair(g, i, j) == true_relation(scm.dag(), i, j) ? 1 : 0;
            }
        ++scms;
        valid += validate_order(scm.dag(), ease(g)).valid ? 1 : 0;
    }
    return {agree == pairs && valid == scms, std::to_string(agree) + "/" + std::to_string(pairs) +
                                                 " pairs classified, " + std::to_string(valid) + "/" +
                                                 std::to_string(scms) + " orders valid"};
}

Outcome estimator_convergence() {
    const std::size_t n = 1'000'000;
    const EstimatorConfig gcfg;
    EstimatorConfig pcfg;
    pcfg.kind = CoefKind::psi;
    const NoiseSpec t1{NoiseFamily::student_t, 1.0, 1.0, 1.0};
    const Scm pos(2, {{0, 1, 1.0}}, {t1, t1}, CoefficientMode::positive_coefficients);
    const Scm neg(2, {{0, 1, -1.0}}, {t1, t1}, CoefficientMode::real_coefficients);
    const double psi21 = psi_population(neg)(1, 0);

    double g21 = 0, g12 = 0, p12 = 0, p21 = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto a = simulate(pos, {}, n, derive_seed(7, {static_cast<std::uint64_t>(s)})).data;
        g21 += gamma_estimate(a, 1, 0, gcfg) / seeds;
        g12 += gamma_estimate(a, 0, 1, gcfg) / seeds;
        const auto b = simulate(neg, {}, n, derive_seed(8, {static_cast<std::uint64_t>(s)})).data;
        p12 += psi_estimate(b, 0, 1, pcfg) / seeds;
        p21 += psi_estimate(b, 1, 0, pcfg) / seeds;
    }
    const bool ok = std::abs(g21 - 0.75) < 0.05 && std::abs(g12 - 1.0) < 0.05 && std::abs(p12 - 1.0) < 0.05 &&
                    std::abs(p21 - psi21) < 0.05;
    return {ok, "k=" + std::to_string(resolve_k(static_cast<long>(n), gcfg)) + " gamma21=" + fmt(g21) +
                    " gamma12=" + fmt(g12) + " psi12=" + fmt(p12) + " psi21=" + fmt(p21) + " (pop " + fmt(psi21) +
                    ")"};
}

Outcome consistency_trend() {
    BenchmarkConfig cfg;
    cfg.grid = linear_grid({500, 1000, 10'000}, {4}, {2.5});
    cfg.methods = {Method::ease_psi, Method::random_order};
    cfg.reps = 50;
    const auto rows = benchmark(cfg);
    std::vector<double> ease_f, random_f;
    for (const auto& r : rows) (r.method == Method::ease_psi ? ease_f : random_f).push_back(r.mean_violation_fraction);
    bool monotone = true;
    for (std::size_t i = 1; i < ease_f.size(); ++i) monotone = monotone && ease_f[i] <= ease_f[i - 1];
    const bool ok = monotone && ease_f.back() < 0.05 && ease_f.back() < random_f.back();
    return {ok, "ease " + fmt(ease_f[0]) + " -> " + fmt(ease_f[1]) + " -> " + fmt(ease_f[2]) + ", random at 1e4 " +
                    fmt(random_f.back())};
}

Outcome robustness_settings() {
    BenchmarkConfig cfg;
    cfg.grid = linear_grid({10'000}, {4}, {2.5},
                           {SettingKind::linear, SettingKind::hidden_confounders, SettingKind::nonlinear,
                            SettingKind::uniform_margins});
    cfg.methods = {Method::ease_gamma, Method::ease_psi};
    cfg.reps = 50;
    const auto rows = benchmark(cfg);
    auto row = [&](SettingKind s, Method m) -> const BenchmarkRow& {
        for (const auto& r : rows)
            if (r.setting == s && r.method == m) return r;
        throw std::logic_error("missing row");
    };
    const double hidden = row(SettingKind::hidden_confounders, Method::ease_psi).mean_violation_fraction;
    const double nonlinear = row(SettingKind::nonlinear, Method::ease_psi).mean_violation_fraction;
    bool identical = true;
    for (auto m : cfg.methods) {
        const auto& a = row(SettingKind::linear, m);
        const auto& b = row(SettingKind::uniform_margins, m);
        identical = identical && a.mean_violation_fraction == b.mean_violation_fraction && a.se == b.se &&
                    a.mistake_rate == b.mistake_rate;
    }
    // Data-level check on shared seeds.
    const ScenarioStream stream(cfg.grid, 3, cfg.seed);
    EstimatorConfig psi;
    psi.kind = CoefKind::psi;
    for (std::size_t r = 0; r < 3; ++r) {
        const auto a = gamma_matrix(stream.scenario(0, r).data, psi).values;
        const auto b = gamma_matrix(stream.scenario(3, r).data, psi).values;
        identical = identical && ((a.array() == b.array()) || (a.array().isNaN() && b.array().isNaN())).all();
    }
    return {hidden < 0.1 && nonlinear < 0.1 && identical,
            "hidden " + fmt(hidden) + ", nonlinear " + fmt(nonlinear) + ", linear == uniform: " +
                (identical ? "yes" : "no")};
}

Outcome k_sensitivity_range() {
    KSensitivityConfig cfg;
    cfg.grid = linear_grid({1000}, {10}, {1.5, 2.5, 3.5});
    cfg.exponents = {0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    cfg.reps = 20;
    cfg.kind = CoefKind::psi;
    const auto rows = k_sensitivity(cfg);
    std::vector<double> mean(cfg.exponents.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        mean[i % cfg.exponents.size()] += rows[i].mean_violation_fraction / static_cast<double>(cfg.grid.alphas.size());
    const auto best = static_cast<std::size_t>(std::min_element(mean.begin(), mean.end()) - mean.begin());
    std::string curve;
    for (std::size_t e = 0; e < mean.size(); ++e) curve += (e ? " " : "") + fmt(cfg.exponents[e], 2) + ":" + fmt(mean[e], 3);
    const double x = cfg.exponents[best];
    return {x >= 0.3 - 1e-12 && x <= 0.5 + 1e-12, "argmin " + fmt(x, 2) + " [" + curve + "]"};
}

// Exact rational evaluation of the estimators by exhaustive counting.
struct Rational {
    long num = 0;
    long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// X_ij > X_(n-k) exactly when at most k values are >= X_ij; X_ij < X_(k+1)
// exactly when at most k values are <= X_ij. Ties are counted on both sides.
Rational gamma_exhaustive(const Eigen::MatrixXd& v, int j, int c, long k) {
    const long n = v.rows();
    long sum = 0;
    for (long i = 0; i < n; ++i) {
        long at_or_above = 0, rank = 0;
        for (long r = 0; r < n; ++r) {
            at_or_above += v(r, j) >= v(i, j) ? 1 : 0;
            rank += v(r, c) <= v(i, c) ? 1 : 0;
        }
        if (at_or_above <= k) sum += rank;
    }
    return {sum, n * k};
}

Rational psi_exhaustive(const Eigen::MatrixXd& v, int j, int c, long k) {
    const long n = v.rows();
    long sum = 0;
    for (long i = 0; i < n; ++i) {
        long at_or_above = 0, at_or_below_j = 0, rank = 0;
        for (long r = 0; r < n; ++r) {
            at_or_above += v(r, j) >= v(i, j) ? 1 : 0;
            at_or_below_j += v(r, j) <= v(i, j) ? 1 : 0;
            rank += v(r, c) <= v(i, c) ? 1 : 0;
        }
        const long s = std::labs(2 * rank - n);
        if (at_or_above <= k) sum += s;
        if (at_or_below_j <= k) sum += s;
    }
    return {sum, 2 * n * k};
}

Outcome brute_force_oracle() {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> small(0, 4);
    std::student_t_distribution<double> t(1.5);
    std::size_t checks = 0, mismatches = 0;
    for (int draw = 0; draw < 200; ++draw) {
        const int n = 2 + draw % 11;
        Eigen::MatrixXd v(n, 2);
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < 2; ++c) v(i, c) = draw % 2 == 0 ? small(rng) : t(rng);
        const Dataset d = pair_dataset(v);
        for (long k = 1; k < n; ++k) {
            EstimatorConfig g;
            g.k = k;
            EstimatorConfig p = g;
            p.kind = CoefKind::psi;
            for (int j = 0; j < 2; ++j) {
                checks += 2;
                mismatches += gamma_estimate(d, j, 1 - j, g) == gamma_exhaustive(v, j, 1 - j, k).value() ? 0 : 1;
                mismatches += psi_estimate(d, j, 1 - j, p) == psi_exhaustive(v, j, 1 - j, k).value() ? 0 : 1;
            }
        }
    }
    return {mismatches == 0, std::to_string(checks - mismatches) + "/" + std::to_string(checks) + " exact matches"};
}

Outcome regular_variation() {
    std::string detail;
    bool ok = true;
    for (int m = 2; m <= 4; ++m) {
        Eigen::MatrixXd x(1'000'000, m);
        for (int c = 0; c < m; ++c) {
            const auto col = sample_noise({NoiseFamily::shifted_pareto, 1.5, 1.0, 1.0}, 1'000'000,
                                          derive_seed(31, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(c)}));
            x.col(c) = Eigen::Map<const Eigen::VectorXd>(col.data(), 1'000'000);
        }
        const double r = max_sum_tail_ratio(x, 0.999);
        ok = ok && r >= 0.8 && r <= 1.2;
        detail += "ratio(m=" + std::to_string(m) + ")=" + fmt(r) + " ";
    }
    // Exact Pareto has no second-order bias, so a larger intermediate k is admissible.
    const std::size_t n = 100'000;
    const auto k = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.6)));
    for (double alpha : {1.0, 2.0}) {
        const auto x = sample_noise({NoiseFamily::shifted_pareto, alpha, 1.0, 1.0}, n,
                                    derive_seed(32, {static_cast<std::uint64_t>(alpha)}));
        const double a = hill_tail_index(x, k).alpha_hat;
        ok = ok && std::abs(a - alpha) <= 0.1 * alpha;
        detail += "hill(alpha=" + fmt(alpha, 2) + ",k=" + std::to_string(k) + ")=" + fmt(a) + " ";
    }
    return {ok, detail};
}

Outcome invariance_suite() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto sim = simulate(random_scm(5, 1.5, {}, s), {}, 5000, derive_seed(40, {s}));
        const Eigen::MatrixXd& v = sim.data.values;
        Eigen::MatrixXd transformed = v;
        transformed.col(0) = v.col(0).unaryExpr([](double x) { return std::cbrt(x) * 2.0 + 5.0; });
        transformed.col(2) = v.col(2).unaryExpr([](double x) { return std::asinh(x); });
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(v.rows()));
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        std::shuffle(perm.begin(), perm.end(), std::mt19937_64(s));
        Eigen::MatrixXd permuted(v.rows(), v.cols());
        for (Eigen::Index i = 0; i < v.rows(); ++i) permuted.row(i) = v.row(perm[static_cast<std::size_t>(i)]);

        for (auto kind : {CoefKind::gamma, CoefKind::psi}) {
            EstimatorConfig cfg;
            cfg.kind = kind;
            const auto base = gamma_matrix(sim.data, cfg);
            const auto mt = gamma_matrix(Dataset(sim.data.names, transformed), cfg);
            const auto pm = gamma_matrix(Dataset(sim.data.names, permuted), cfg);
            for (int i = 0; i < 5; ++i)
                for (int j = 0; j < 5; ++j)
                    if (i != j) ok = ok && base(i, j) == mt(i, j) && base(i, j) == pm(i, j);
            ok = ok && ease(base) == ease(base);
        }
    }
    detail += "monotone + permutation invariance bit-exact: " + std::string(ok ? "yes" : "no");
    // Ties resolve to the smallest index, every time.
    CoefMatrix flat;
    flat.values = Eigen::MatrixXd::Constant(6, 6, 0.5);
    const bool ties = ease(flat).sequence() == std::vector<Node>{0, 1, 2, 3, 4, 5};
    detail += ", tie-break smallest index: " + std::string(ties ? "yes" : "no");
    return {ok && ties, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"A1", "financial fixture order", financial_fixture},
        {"A2", "population oracle correctness", oracle_correctness},
        {"A3", "estimator convergence to population values", estimator_convergence},
        {"A4", "consistency trend in n", consistency_trend},
        {"A5", "robustness settings", robustness_settings},
        {"A6", "k exponent sensitivity", k_sensitivity_range},
        {"A7", "brute-force estimator oracle", brute_force_oracle},
        {"A8", "regular variation diagnostics", regular_variation},
        {"A9", "invariance suite", invariance_suite},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << ": " << o.detail << " ("
                  << fmt(secs, 3) << " s)" << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
