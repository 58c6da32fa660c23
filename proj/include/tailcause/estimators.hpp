#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tailcause/population_oracle.hpp"

namespace tailcause {

// n x p sample with column names. Eigen storage is column-major.
struct Dataset {
    std::vector<std::string> names;
    Eigen::MatrixXd values;

    Dataset() = default;
    // Throws ValidationError on empty data, name/column mismatch or non-finite entries.
    Dataset(std::vector<std::string> names, Eigen::MatrixXd values);

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    // Column index for `name`; ValidationError when absent.
    int column(const std::string& name) const;
};

struct EstimatorConfig {
    std::optional<long> k;          // explicit exceedance count; wins over k_exponent
    double k_exponent = 0.4;        // k = floor(n^k_exponent) otherwise
    CoefKind kind = CoefKind::gamma;
};

// Explicit k must lie in [1, n-1] (ConfigError otherwise); the exponent route
// must lie in (0, 1) and is clamped to [1, n-1].
long resolve_k(long n, const EstimatorConfig& config);

// Maximal ranks: rank[i] = #{i' : x[i'] <= x[i]}, in 1..n.
std::vector<long> max_ranks(const Eigen::Ref<const Eigen::VectorXd>& column);

// F_hat_j(X_ij) = rank / n.
std::vector<double> empirical_cdf_column(const Dataset& data, int j);

// Gamma_hat_{j,k} = (1/k) sum_i F_hat_k(X_ik) 1{X_ij > X_(n-k),j}.
double gamma_estimate(const Dataset& data, int j, int k_col, const EstimatorConfig& config);

// Psi_hat_{j,k}: upper- and lower-tail exceedances of column j, each weighted
// 1/(2k), averaging sigma(F_hat_k) with sigma(x) = |2x - 1|.
double psi_estimate(const Dataset& data, int j, int k_col, const EstimatorConfig& config);

struct PsiTerms {
    double upper = 0.0;  // upper-tail half; psi_estimate = upper + lower
    double lower = 0.0;
};
PsiTerms psi_estimate_terms(const Dataset& data, int j, int k_col, const EstimatorConfig& config);

// All ordered off-diagonal pairs of config.kind; ranks are computed once per column.
CoefMatrix gamma_matrix(const Dataset& data, const EstimatorConfig& config);

}  // namespace tailcause
