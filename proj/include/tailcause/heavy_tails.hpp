#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tailcause {

enum class NoiseFamily { student_t, symmetric_pareto, shifted_pareto };

std::string_view to_string(NoiseFamily family);
NoiseFamily noise_family_from_string(std::string_view name);

// Regularly varying noise law with tail index alpha. The scales are tail
// constants: P(X > x) ~ scale_upper * C * x^-alpha and P(X < -x) ~
// scale_lower * C * x^-alpha, where C = 1 for the Pareto families and the
// Student-t tail constant for student_t.
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::student_t;
    double alpha = 2.0;
    double scale_upper = 1.0;
    double scale_lower = 1.0;

    // Throws ValidationError when an invariant is broken.
    void validate() const;

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct TailConstants {
    double upper = 0.0;
    double lower = 0.0;
};

// Exact asymptotic tail constants of the implemented sampler for `spec`.
TailConstants tail_constants(const NoiseSpec& spec);

// lim x^nu P(T > x) for a standard Student-t with nu degrees of freedom.
double student_t_tail_constant(double nu);

// n i.i.d. draws; bit-identical for identical (spec, n, seed).
std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed);

struct TailIndexEstimate {
    double alpha_hat = 0.0;
    double xi_hat = 0.0;
};

// Hill estimator over the k+1 largest order statistics:
//   xi_hat = (1/k) sum_{i=1..k} log(X_(n-i+1) / X_(n-k)),  alpha_hat = 1/xi_hat.
TailIndexEstimate hill_tail_index(std::span<const double> data, std::size_t k);

// Empirical P(row max > x) / P(row sum > x), x the empirical quantile_level
// quantile of the row sums. Diagnostic for max-sum equivalence.
double max_sum_tail_ratio(const Eigen::MatrixXd& samples, double quantile_level);

}  // namespace tailcause
