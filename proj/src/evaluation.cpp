#include "tailcause/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "tailcause/error.hpp"
#include "tailcause/parallel.hpp"
#include "tailcause/seeding.hpp"

namespace tailcause {

OrderScore score_order(const Scm& truth, const CausalOrder& order) {
    const std::vector<Node> observed = truth.observed();
    if (static_cast<std::size_t>(order.size()) != observed.size())
        throw ValidationError("score_order: order covers " + std::to_string(order.size()) + " nodes, truth has " +
                              std::to_string(observed.size()) + " observed nodes");
    OrderScore score;
    const Dag& dag = truth.dag();
    for (std::size_t a = 0; a < observed.size(); ++a)
        for (std::size_t d = 0; d < observed.size(); ++d) {
            if (a == d || !dag.is_ancestor(observed[a], observed[d])) continue;
            ++score.ancestral_pairs;
            if (order.position(static_cast<Node>(a)) > order.position(static_cast<Node>(d))) ++score.violations;
        }
    score.valid = score.violations == 0;
    score.violation_fraction = score.ancestral_pairs == 0
                                   ? 0.0
                                   : static_cast<double>(score.violations) / static_cast<double>(score.ancestral_pairs);
    return score;
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::ease_gamma: return "ease_gamma";
        case Method::ease_psi: return "ease_psi";
        case Method::random_order: return "random_order";
    }
    return "ease_psi";
}

Method method_from_string(std::string_view name) {
    if (name == "ease_gamma") return Method::ease_gamma;
    if (name == "ease_psi") return Method::ease_psi;
    if (name == "random_order") return Method::random_order;
    throw ValidationError("unknown method '" + std::string(name) + "'");
}

namespace {

struct Sample {
    double fraction = 0.0;
    bool valid = true;
    double ms = 0.0;
};

struct Summary {
    double mean = 0.0;
    double se = 0.0;
    double mistake_rate = 0.0;
    double mean_ms = 0.0;
};

// Fixed replicate-order accumulation.
Summary summarize(const std::vector<Sample>& samples) {
    Summary s;
    const auto r = static_cast<double>(samples.size());
    std::size_t invalid = 0;
    for (const auto& x : samples) {
        s.mean += x.fraction;
        s.mean_ms += x.ms;
        if (!x.valid) ++invalid;
    }
    s.mean /= r;
    s.mean_ms /= r;
    s.mistake_rate = static_cast<double>(invalid) / r;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (const auto& x : samples) ss += (x.fraction - s.mean) * (x.fraction - s.mean);
        s.se = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
    }
    return s;
}

CausalOrder random_permutation(int p, std::uint64_t seed) {
    std::vector<Node> seq(static_cast<std::size_t>(p));
    std::iota(seq.begin(), seq.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(seq.begin(), seq.end(), rng);
    return CausalOrder::from_sequence(seq);
}

}  // namespace

std::vector<BenchmarkRow> benchmark(const BenchmarkConfig& config) {
    if (config.methods.empty()) throw ValidationError("benchmark: no methods given");
    const ScenarioStream stream(config.grid, config.reps, config.seed);
    const std::size_t n_methods = config.methods.size();

    std::vector<BenchmarkRow> rows;
    for (std::size_t c = 0; c < stream.cell_count(); ++c) {
        const GridCell& cell = stream.cells()[c];
        // samples[m][r]
        std::vector<std::vector<Sample>> samples(n_methods, std::vector<Sample>(config.reps));
        parallel_for(config.reps, config.threads, [&](std::size_t r) {
            const Scenario sc = stream.scenario(c, r);
            for (std::size_t m = 0; m < n_methods; ++m) {
                const auto start = std::chrono::steady_clock::now();
                CausalOrder order;
                switch (config.methods[m]) {
                    case Method::ease_gamma:
                    case Method::ease_psi: {
                        EstimatorConfig est;
                        est.k_exponent = config.k_exponent;
                        est.kind = config.methods[m] == Method::ease_gamma ? CoefKind::gamma : CoefKind::psi;
                        order = ease(gamma_matrix(sc.data, est));
                        break;
                    }
                    case Method::random_order:
                        order = random_permutation(static_cast<int>(sc.data.cols()), derive_seed(sc.seed, {2}));
                        break;
                }
                const auto stop = std::chrono::steady_clock::now();
                const OrderScore score = score_order(sc.truth, order);
                samples[m][r] = {score.violation_fraction, score.valid,
                                 std::chrono::duration<double, std::milli>(stop - start).count()};
            }
        });
        for (std::size_t m = 0; m < n_methods; ++m) {
            const Summary s = summarize(samples[m]);
            rows.push_back({cell.id, cell.setting, cell.n, cell.p, cell.alpha, config.methods[m], s.mean, s.se,
                            s.mistake_rate, s.mean_ms});
        }
    }
    return rows;
}

namespace {

void check_exponents(const std::vector<double>& exponents) {
    if (exponents.empty()) throw ValidationError("k_sensitivity: empty exponent list");
    for (double x : exponents)
        if (!(x > 0.0 && x < 1.0)) throw ValidationError("k_sensitivity: exponents must lie in (0, 1)");
}

}  // namespace

std::vector<KSensitivityRow> k_sensitivity(const KSensitivityConfig& config) {
    check_exponents(config.exponents);
    const ScenarioStream stream(config.grid, config.reps, config.seed);
    const std::size_t n_exp = config.exponents.size();

    std::vector<KSensitivityRow> rows;
    for (std::size_t c = 0; c < stream.cell_count(); ++c) {
        const GridCell& cell = stream.cells()[c];
        std::vector<std::vector<Sample>> samples(n_exp, std::vector<Sample>(config.reps));
        parallel_for(config.reps, config.threads, [&](std::size_t r) {
            const Scenario sc = stream.scenario(c, r);
            for (std::size_t e = 0; e < n_exp; ++e) {
                EstimatorConfig est;
                est.k_exponent = config.exponents[e];
                est.kind = config.kind;
                const OrderScore score = score_order(sc.truth, ease(gamma_matrix(sc.data, est)));
                samples[e][r] = {score.violation_fraction, score.valid, 0.0};
            }
        });
        for (std::size_t e = 0; e < n_exp; ++e) {
            const Summary s = summarize(samples[e]);
            EstimatorConfig est;
            est.k_exponent = config.exponents[e];
            rows.push_back({cell.id, cell.setting, cell.n, cell.p, cell.alpha, config.exponents[e],
                            resolve_k(static_cast<long>(cell.n), est), s.mean, s.se, s.mistake_rate});
        }
    }
    return rows;
}

std::vector<KCoefficientRow> k_sensitivity(const Dataset& data, const std::vector<double>& exponents, CoefKind kind) {
    check_exponents(exponents);
    std::vector<KCoefficientRow> rows;
    for (double x : exponents) {
        EstimatorConfig est;
        est.k_exponent = x;
        est.kind = kind;
        rows.push_back({x, resolve_k(static_cast<long>(data.rows()), est), gamma_matrix(data, est)});
    }
    return rows;
}

}  // namespace tailcause
