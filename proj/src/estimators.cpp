#include "tailcause/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "tailcause/error.hpp"

namespace tailcause {

Dataset::Dataset(std::vector<std::string> names_in, Eigen::MatrixXd values_in)
    : names(std::move(names_in)), values(std::move(values_in)) {
    if (values.rows() < 1 || values.cols() < 1) throw ValidationError("Dataset: empty sample");
    if (names.size() != static_cast<std::size_t>(values.cols()))
        throw ValidationError("Dataset: need one name per column");
    if (!values.allFinite()) throw ValidationError("Dataset: non-finite entries");
}

int Dataset::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ValidationError("Dataset: no column named '" + name + "'");
    return static_cast<int>(it - names.begin());
}

long resolve_k(long n, const EstimatorConfig& config) {
    if (n < 2) throw ConfigError("resolve_k: need n >= 2");
    if (config.k) {
        if (*config.k < 1 || *config.k > n - 1)
            throw ConfigError("resolve_k: k = " + std::to_string(*config.k) + " outside [1, " +
                              std::to_string(n - 1) + "]");
        return *config.k;
    }
    if (!(config.k_exponent > 0.0 && config.k_exponent < 1.0))
        throw ConfigError("resolve_k: k_exponent must lie in (0, 1)");
    // Relative nudge so exact powers (n = 10^5, x = 0.4) do not floor one short.
    const double raw = std::pow(static_cast<double>(n), config.k_exponent) * (1.0 + 1e-12);
    return std::clamp(static_cast<long>(std::floor(raw)), 1L, n - 1);
}

namespace {

// Per-column rank summary shared by every pair that touches the column.
// Exceedances are decided on maximal ranks: x > t  <=>  rank(x) > #{<= t}, and
// x < t  <=>  rank(x) <= #{< t}.
struct ColumnRanks {
    std::vector<long> rank;
    std::vector<double> sorted;
};

ColumnRanks rank_column(const Eigen::Ref<const Eigen::VectorXd>& column) {
    ColumnRanks out;
    out.sorted.assign(column.data(), column.data() + column.size());
    std::sort(out.sorted.begin(), out.sorted.end());
    out.rank.resize(out.sorted.size());
    for (std::size_t i = 0; i < out.rank.size(); ++i)
        out.rank[i] = std::upper_bound(out.sorted.begin(), out.sorted.end(), column[static_cast<Eigen::Index>(i)]) -
                      out.sorted.begin();
    return out;
}

// Count of entries <= X_(n-k): upper exceedances are ranks strictly above it.
long upper_cut(const ColumnRanks& c, long k) {
    const double t = c.sorted[c.sorted.size() - static_cast<std::size_t>(k) - 1];
    return std::upper_bound(c.sorted.begin(), c.sorted.end(), t) - c.sorted.begin();
}

// Count of entries < X_(k+1) = -(-X)_(n-k): lower exceedances are ranks at or below it.
long lower_cut(const ColumnRanks& c, long k) {
    const double t = c.sorted[static_cast<std::size_t>(k)];
    return std::lower_bound(c.sorted.begin(), c.sorted.end(), t) - c.sorted.begin();
}

// Sums are exact integers, so results are independent of row order.
double gamma_from_ranks(const ColumnRanks& cond, long cut, const ColumnRanks& target, long k) {
    const auto n = static_cast<long>(cond.rank.size());
    long sum = 0;
    for (std::size_t i = 0; i < cond.rank.size(); ++i)
        if (cond.rank[i] > cut) sum += target.rank[i];
    return static_cast<double>(sum) / (static_cast<double>(n) * static_cast<double>(k));
}

// sigma(F) = |2 rank/n - 1| = |2 rank - n| / n.
PsiTerms psi_terms_from_ranks(const ColumnRanks& cond, long up_cut, long low_cut, const ColumnRanks& target, long k) {
    const auto n = static_cast<long>(cond.rank.size());
    long upper = 0;
    long lower = 0;
    for (std::size_t i = 0; i < cond.rank.size(); ++i) {
        const long s = std::labs(2 * target.rank[i] - n);
        if (cond.rank[i] > up_cut) upper += s;
        if (cond.rank[i] <= low_cut) lower += s;
    }
    const double denom = 2.0 * static_cast<double>(n) * static_cast<double>(k);
    return {static_cast<double>(upper) / denom, static_cast<double>(lower) / denom};
}

double psi_from_ranks(const ColumnRanks& cond, long up_cut, long low_cut, const ColumnRanks& target, long k) {
    const auto n = static_cast<long>(cond.rank.size());
    long sum = 0;
    for (std::size_t i = 0; i < cond.rank.size(); ++i) {
        const long s = std::labs(2 * target.rank[i] - n);
        if (cond.rank[i] > up_cut) sum += s;
        if (cond.rank[i] <= low_cut) sum += s;
    }
    return static_cast<double>(sum) / (2.0 * static_cast<double>(n) * static_cast<double>(k));
}

void check_pair(const Dataset& data, int j, int k_col) {
    if (j < 0 || k_col < 0 || j >= data.cols() || k_col >= data.cols())
        throw ValidationError("estimator: column out of range");
    if (j == k_col) throw ValidationError("estimator: columns must differ");
}

}  // namespace

std::vector<long> max_ranks(const Eigen::Ref<const Eigen::VectorXd>& column) {
    return rank_column(column).rank;
}

std::vector<double> empirical_cdf_column(const Dataset& data, int j) {
    if (j < 0 || j >= data.cols()) throw ValidationError("empirical_cdf_column: column out of range");
    const auto ranks = max_ranks(data.values.col(j));
    const auto n = static_cast<double>(ranks.size());
    std::vector<double> out(ranks.size());
    std::transform(ranks.begin(), ranks.end(), out.begin(), [n](long r) { return static_cast<double>(r) / n; });
    return out;
}

double gamma_estimate(const Dataset& data, int j, int k_col, const EstimatorConfig& config) {
    check_pair(data, j, k_col);
    const long k = resolve_k(static_cast<long>(data.rows()), config);
    const ColumnRanks cond = rank_column(data.values.col(j));
    const ColumnRanks target = rank_column(data.values.col(k_col));
    return gamma_from_ranks(cond, upper_cut(cond, k), target, k);
}

double psi_estimate(const Dataset& data, int j, int k_col, const EstimatorConfig& config) {
    check_pair(data, j, k_col);
    const long k = resolve_k(static_cast<long>(data.rows()), config);
    const ColumnRanks cond = rank_column(data.values.col(j));
    const ColumnRanks target = rank_column(data.values.col(k_col));
    return psi_from_ranks(cond, upper_cut(cond, k), lower_cut(cond, k), target, k);
}

PsiTerms psi_estimate_terms(const Dataset& data, int j, int k_col, const EstimatorConfig& config) {
    check_pair(data, j, k_col);
    const long k = resolve_k(static_cast<long>(data.rows()), config);
    const ColumnRanks cond = rank_column(data.values.col(j));
    const ColumnRanks target = rank_column(data.values.col(k_col));
    return psi_terms_from_ranks(cond, upper_cut(cond, k), lower_cut(cond, k), target, k);
}

CoefMatrix gamma_matrix(const Dataset& data, const EstimatorConfig& config) {
    const auto p = static_cast<int>(data.cols());
    const long k = resolve_k(static_cast<long>(data.rows()), config);

    std::vector<ColumnRanks> ranks;
    std::vector<long> up(static_cast<std::size_t>(p));
    std::vector<long> low(static_cast<std::size_t>(p));
    ranks.reserve(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        ranks.push_back(rank_column(data.values.col(j)));
        up[static_cast<std::size_t>(j)] = upper_cut(ranks.back(), k);
        low[static_cast<std::size_t>(j)] = lower_cut(ranks.back(), k);
    }

    CoefMatrix out;
    out.kind = config.kind;
    out.names = data.names;
    out.values = Eigen::MatrixXd::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < p; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        for (int c = 0; c < p; ++c) {
            if (c == j) continue;
            const auto& target = ranks[static_cast<std::size_t>(c)];
            out.values(j, c) = config.kind == CoefKind::gamma
                                   ? gamma_from_ranks(ranks[uj], up[uj], target, k)
                                   : psi_from_ranks(ranks[uj], up[uj], low[uj], target, k);
        }
    }
    return out;
}

}  // namespace tailcause
