#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tailcause/ease.hpp"
#include "tailcause/simulator.hpp"

namespace tailcause {

// Name of the order metric in every output. Counts reversed ancestral pairs;
// this is not the structural intervention distance.
inline constexpr std::string_view kOrderMetric = "ancestral-violation";

struct OrderScore {
    bool valid = true;
    std::size_t violations = 0;
    double violation_fraction = 0.0;
    std::size_t ancestral_pairs = 0;
};

// `order` ranks the observed nodes of `truth` (order index r is the r-th
// observed node in ascending index order). Ancestry is taken in the full graph.
OrderScore score_order(const Scm& truth, const CausalOrder& order);

enum class Method { ease_gamma, ease_psi, random_order };
std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

struct BenchmarkRow {
    std::size_t scenario_id = 0;  // grid cell id
    SettingKind setting = SettingKind::linear;
    std::size_t n = 0;
    int p = 0;
    double alpha = 0.0;
    Method method = Method::ease_psi;
    double mean_violation_fraction = 0.0;
    double se = 0.0;
    double mistake_rate = 0.0;
    double wall_ms = 0.0;  // mean per replicate
};

struct BenchmarkConfig {
    SimGrid grid;
    std::vector<Method> methods{Method::ease_gamma, Method::ease_psi, Method::random_order};
    std::size_t reps = 50;
    std::uint64_t seed = 1;
    double k_exponent = 0.4;
    unsigned threads = 1;
};

// One row per (grid cell, method), rows in cell order then method order.
// Aggregates are accumulated in replicate order, so everything but wall_ms is
// identical for any thread count.
std::vector<BenchmarkRow> benchmark(const BenchmarkConfig& config);

struct KSensitivityRow {
    std::size_t scenario_id = 0;
    SettingKind setting = SettingKind::linear;
    std::size_t n = 0;
    int p = 0;
    double alpha = 0.0;
    double exponent = 0.0;
    long k = 0;
    double mean_violation_fraction = 0.0;
    double se = 0.0;
    double mistake_rate = 0.0;
};

struct KSensitivityConfig {
    SimGrid grid;
    std::vector<double> exponents;
    std::size_t reps = 20;
    std::uint64_t seed = 1;
    CoefKind kind = CoefKind::psi;
    unsigned threads = 1;
};

// Sweeps k = floor(n^x) over simulated scenarios; replicates are shared across
// exponents and match benchmark()'s scenarios for the same grid and seed.
std::vector<KSensitivityRow> k_sensitivity(const KSensitivityConfig& config);

struct KCoefficientRow {
    double exponent = 0.0;
    long k = 0;
    CoefMatrix coefs;
};

// Coefficient matrices of one dataset across exponents.
std::vector<KCoefficientRow> k_sensitivity(const Dataset& data, const std::vector<double>& exponents, CoefKind kind);

}  // namespace tailcause
