#include "tailcause/simulator.hpp"

#include <algorithm>
#include <string>

#include "tailcause/error.hpp"
#include "tailcause/seeding.hpp"

namespace tailcause {

std::string_view to_string(SettingKind kind) {
    switch (kind) {
        case SettingKind::linear: return "linear";
        case SettingKind::hidden_confounders: return "hidden_confounders";
        case SettingKind::nonlinear: return "nonlinear";
        case SettingKind::uniform_margins: return "uniform_margins";
    }
    return "linear";
}

SettingKind setting_kind_from_string(std::string_view name) {
    if (name == "linear") return SettingKind::linear;
    if (name == "hidden_confounders") return SettingKind::hidden_confounders;
    if (name == "nonlinear") return SettingKind::nonlinear;
    if (name == "uniform_margins") return SettingKind::uniform_margins;
    throw ValidationError("unknown setting '" + std::string(name) + "'");
}

void SimSetting::validate() const {
    const bool ok = (nonlinear_quantile > 0.0 || (allow_zero_quantile && nonlinear_quantile == 0.0)) &&
                    nonlinear_quantile < 1.0;
    if (!ok) throw ValidationError("nonlinear_quantile must lie in (0, 1)");
}

namespace {

Eigen::VectorXd empirical_cdf(const Eigen::VectorXd& column) {
    const auto ranks = max_ranks(column);
    const auto n = static_cast<double>(ranks.size());
    Eigen::VectorXd out(column.size());
    for (Eigen::Index i = 0; i < column.size(); ++i) out[i] = static_cast<double>(ranks[static_cast<std::size_t>(i)]) / n;
    return out;
}

}  // namespace

Simulation simulate(const Scm& scm, const SimSetting& setting, std::size_t n, std::uint64_t seed) {
    setting.validate();
    if (n < 1) throw ValidationError("simulate: n must be at least 1");
    const bool needs_cdf = setting.kind == SettingKind::nonlinear || setting.kind == SettingKind::uniform_margins;
    if (needs_cdf && n < 2) throw DegenerateError("simulate: empirical CDF settings need n >= 2");

    const int p = scm.size();
    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd x(rows, p);
    // f(X_j) per node, filled once the node is generated.
    Eigen::MatrixXd transformed(rows, p);

    for (Node j : scm.dag().topological_order()) {
        const auto noise = sample_noise(scm.noise()[static_cast<std::size_t>(j)], n,
                                        derive_seed(seed, {static_cast<std::uint64_t>(j)}));
        auto col = x.col(j);
        col = Eigen::Map<const Eigen::VectorXd>(noise.data(), rows);
        for (Node k : scm.dag().parents(j)) col += scm.beta(k, j) * transformed.col(k);

        if (setting.kind == SettingKind::nonlinear) {
            const Eigen::VectorXd cdf = empirical_cdf(col);
            for (Eigen::Index i = 0; i < rows; ++i)
                transformed(i, j) = cdf[i] > setting.nonlinear_quantile ? col[i] : 0.0;
        } else {
            transformed.col(j) = col;
        }
    }

    const std::vector<Node> observed = scm.observed();
    Eigen::MatrixXd values(rows, static_cast<Eigen::Index>(observed.size()));
    std::vector<std::string> names;
    for (std::size_t c = 0; c < observed.size(); ++c) {
        const Node j = observed[c];
        names.push_back(scm.names()[static_cast<std::size_t>(j)]);
        values.col(static_cast<Eigen::Index>(c)) =
            setting.kind == SettingKind::uniform_margins ? empirical_cdf(x.col(j)) : Eigen::VectorXd(x.col(j));
    }
    return {Dataset(std::move(names), std::move(values)), scm};
}

void SimGrid::validate() const {
    if (ns.empty() || ps.empty() || alphas.empty() || settings.empty())
        throw ValidationError("grid: every axis (n, p, alpha, settings) needs at least one value");
    for (auto n : ns)
        if (n < 2) throw ValidationError("grid: n values must be at least 2");
    for (int p : ps)
        if (p < 1) throw ValidationError("grid: p values must be at least 1");
    for (double a : alphas)
        if (!(a > 0.0)) throw ValidationError("grid: alpha values must be positive");
    SimSetting{SettingKind::nonlinear, nonlinear_quantile}.validate();
}

ScenarioStream::ScenarioStream(SimGrid grid, std::size_t reps, std::uint64_t seed)
    : grid_(std::move(grid)), reps_(reps), seed_(seed) {
    grid_.validate();
    if (reps_ < 1) throw ValidationError("grid: reps must be at least 1");
    for (auto n : grid_.ns)
        for (int p : grid_.ps) {
            // Hidden confounders add about p/3 columns; budget for the worst case of p.
            const double bytes = 8.0 * static_cast<double>(n) * 2.0 * static_cast<double>(p) * 2.0;
            if (bytes > static_cast<double>(grid_.memory_cap_bytes))
                throw CapacityError("grid: scenario n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                                    " exceeds the memory cap");
        }

    std::size_t id = 0;
    for (auto setting : grid_.settings)
        for (std::size_t a = 0; a < grid_.ns.size(); ++a)
            for (std::size_t b = 0; b < grid_.ps.size(); ++b)
                for (std::size_t c = 0; c < grid_.alphas.size(); ++c)
                    cells_.push_back({id++, setting, grid_.ns[a], grid_.ps[b], grid_.alphas[c], a, b, c});
}

std::uint64_t ScenarioStream::scenario_seed(const GridCell& cell, std::size_t rep) const {
    return derive_seed(seed_, {cell.n, static_cast<std::uint64_t>(cell.p),
                               static_cast<std::uint64_t>(cell.alpha * 1e6), rep});
}

Scenario ScenarioStream::scenario(std::size_t cell_index, std::size_t rep) const {
    const GridCell& cell = cells_.at(cell_index);
    if (rep >= reps_) throw ValidationError("grid: replicate index out of range");
    const std::uint64_t seed = scenario_seed(cell, rep);

    RandomScmConfig config = grid_.scm_config;
    config.hidden_confounders = cell.setting == SettingKind::hidden_confounders;
    Scm scm = random_scm(cell.p, cell.alpha, config, derive_seed(seed, {0}));
    Simulation sim = simulate(scm, SimSetting{cell.setting, grid_.nonlinear_quantile}, cell.n, derive_seed(seed, {1}));
    return {cell_index * reps_ + rep, cell, rep, seed, std::move(sim.data), std::move(sim.truth)};
}

std::optional<Scenario> ScenarioStream::next() {
    if (cursor_ >= size()) return std::nullopt;
    const std::size_t index = cursor_++;
    return scenario(index / reps_, index % reps_);
}

}  // namespace tailcause
