#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tailcause/estimators.hpp"
#include "tailcause/scm_graph.hpp"

namespace tailcause {

enum class SettingKind { linear, hidden_confounders, nonlinear, uniform_margins };
std::string_view to_string(SettingKind kind);
SettingKind setting_kind_from_string(std::string_view name);

struct SimSetting {
    SettingKind kind = SettingKind::linear;
    double nonlinear_quantile = 0.95;
    // Test hook: accept nonlinear_quantile = 0, which reduces nonlinear to linear.
    bool allow_zero_quantile = false;

    void validate() const;
};

struct Simulation {
    Dataset data;  // observed columns only
    Scm truth;
};

// Generates n rows in topological order: X_i = sum_j beta_ij f(X_j) + eps_i, with
// f the identity (linear), or X_j 1{F_hat_j(X_j) > q} (nonlinear, F_hat over the
// generated column). uniform_margins replaces each observed column by its
// empirical CDF. Hidden columns are dropped from `data`.
Simulation simulate(const Scm& scm, const SimSetting& setting, std::size_t n, std::uint64_t seed);

struct SimGrid {
    std::vector<std::size_t> ns;
    std::vector<int> ps;
    std::vector<double> alphas;
    std::vector<SettingKind> settings;
    RandomScmConfig scm_config;  // hidden_confounders is forced per setting
    double nonlinear_quantile = 0.95;
    std::size_t memory_cap_bytes = std::size_t{1} << 30;

    void validate() const;
};

// One (setting, n, p, alpha) combination of a grid.
struct GridCell {
    std::size_t id = 0;
    SettingKind setting = SettingKind::linear;
    std::size_t n = 0;
    int p = 0;
    double alpha = 0.0;
    std::size_t n_index = 0;
    std::size_t p_index = 0;
    std::size_t alpha_index = 0;
};

struct Scenario {
    std::size_t id = 0;  // cell id * reps + rep
    GridCell cell;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    Dataset data;
    Scm truth;
};

// Deterministic, random-access enumeration of a grid: cells ordered by
// setting, n, p, alpha; replicates innermost. Seeds depend on (seed, n, p,
// alpha, rep) and not on the setting, so settings share draws.
class ScenarioStream {
public:
    ScenarioStream(SimGrid grid, std::size_t reps, std::uint64_t seed);

    std::size_t cell_count() const { return cells_.size(); }
    std::size_t size() const { return cells_.size() * reps_; }
    std::size_t reps() const { return reps_; }
    const std::vector<GridCell>& cells() const { return cells_; }
    const SimGrid& grid() const { return grid_; }

    std::uint64_t scenario_seed(const GridCell& cell, std::size_t rep) const;
    Scenario scenario(std::size_t cell_index, std::size_t rep) const;

    // Sequential iteration; nullopt when exhausted.
    std::optional<Scenario> next();

private:
    SimGrid grid_;
    std::size_t reps_;
    std::uint64_t seed_;
    std::vector<GridCell> cells_;
    std::size_t cursor_ = 0;
};

inline ScenarioStream simulate_grid(SimGrid grid, std::size_t reps, std::uint64_t seed) {
    return ScenarioStream(std::move(grid), reps, seed);
}

}  // namespace tailcause
