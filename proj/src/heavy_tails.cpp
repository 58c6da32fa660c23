#include "tailcause/heavy_tails.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "tailcause/error.hpp"

namespace tailcause {

namespace {

// Uniform on (0, 1], built from the top 53 bits so Pareto draws never hit 0^-1/alpha.
double open_unit(std::mt19937_64& rng) {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return 1.0 - static_cast<double>(rng() >> 11) * kScale;
}

}  // namespace

std::string_view to_string(NoiseFamily family) {
    switch (family) {
        case NoiseFamily::student_t: return "student_t";
        case NoiseFamily::symmetric_pareto: return "symmetric_pareto";
        case NoiseFamily::shifted_pareto: return "shifted_pareto";
    }
    return "unknown";
}

NoiseFamily noise_family_from_string(std::string_view name) {
    if (name == "student_t") return NoiseFamily::student_t;
    if (name == "symmetric_pareto") return NoiseFamily::symmetric_pareto;
    if (name == "shifted_pareto") return NoiseFamily::shifted_pareto;
    throw ValidationError("unknown noise family '" + std::string(name) + "'");
}

void NoiseSpec::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("noise alpha must be positive and finite");
    if (!(scale_upper > 0.0) || !(scale_lower > 0.0) || !std::isfinite(scale_upper) ||
        !std::isfinite(scale_lower))
        throw ValidationError("noise scales must be positive and finite");
    if (family == NoiseFamily::student_t && scale_upper != scale_lower)
        throw ValidationError("student_t noise is symmetric: scale_upper must equal scale_lower");
}

double student_t_tail_constant(double nu) {
    // f(x) ~ K nu^{(nu+1)/2} x^{-(nu+1)}, K = Gamma((nu+1)/2) / (sqrt(nu pi) Gamma(nu/2)).
    const double log_k = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                         0.5 * std::log(nu * std::numbers::pi);
    return std::exp(log_k + 0.5 * (nu - 1.0) * std::log(nu));
}

TailConstants tail_constants(const NoiseSpec& spec) {
    spec.validate();
    switch (spec.family) {
        case NoiseFamily::student_t: {
            const double c = student_t_tail_constant(spec.alpha);
            return {spec.scale_upper * c, spec.scale_lower * c};
        }
        case NoiseFamily::symmetric_pareto:
            return {spec.scale_upper, spec.scale_lower};
        case NoiseFamily::shifted_pareto:
            return {spec.scale_upper, 0.0};
    }
    return {};
}

std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw ValidationError("sample_noise: n must be at least 1");

    std::mt19937_64 rng(seed);
    std::vector<double> out(n);
    const double inv_alpha = 1.0 / spec.alpha;

    switch (spec.family) {
        case NoiseFamily::student_t: {
            std::student_t_distribution<double> dist(spec.alpha);
            const double scale = std::pow(spec.scale_upper, inv_alpha);
            for (double& x : out) x = scale * dist(rng);
            break;
        }
        case NoiseFamily::symmetric_pareto: {
            // P(X > x) = c+ x^-alpha and P(X < -x) = c- x^-alpha for |x| >= (c+ + c-)^{1/alpha}.
            const double total = spec.scale_upper + spec.scale_lower;
            const double start = std::pow(total, inv_alpha);
            const double p_upper = spec.scale_upper / total;
            for (double& x : out) {
                const bool upper = open_unit(rng) <= p_upper;
                const double magnitude = start * std::pow(open_unit(rng), -inv_alpha);
                x = upper ? magnitude : -magnitude;
            }
            break;
        }
        case NoiseFamily::shifted_pareto: {
            const double start = std::pow(spec.scale_upper, inv_alpha);
            for (double& x : out) x = start * std::pow(open_unit(rng), -inv_alpha);
            break;
        }
    }
    return out;
}

TailIndexEstimate hill_tail_index(std::span<const double> data, std::size_t k) {
    if (k < 2) throw DomainError("hill_tail_index: k must be at least 2");
    if (data.size() < k + 1)
        throw DomainError("hill_tail_index: need at least k+1 observations");

    std::vector<double> top(data.begin(), data.end());
    std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(),
                     std::greater<>());
    const double threshold = top[k];  // X_(n-k)
    if (!(threshold > 0.0))
        throw DomainError("hill_tail_index: the k+1 largest observations must be positive");

    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += std::log(top[i] / threshold);
    const double xi = sum / static_cast<double>(k);
    if (xi == 0.0) throw DegenerateError("hill_tail_index: all top order statistics are equal");
    return {1.0 / xi, xi};
}

double max_sum_tail_ratio(const Eigen::MatrixXd& samples, double quantile_level) {
    const auto n = static_cast<std::size_t>(samples.rows());
    if (n < 1000) throw ValidationError("max_sum_tail_ratio: need at least 1000 rows");
    if (samples.cols() < 1) throw ValidationError("max_sum_tail_ratio: need at least one column");
    if (!(quantile_level >= 0.9 && quantile_level < 1.0))
        throw ValidationError("max_sum_tail_ratio: quantile_level must lie in [0.9, 1)");

    const Eigen::VectorXd sums = samples.rowwise().sum();
    const Eigen::VectorXd maxima = samples.rowwise().maxCoeff();

    std::vector<double> sorted(sums.data(), sums.data() + n);
    const auto pos = static_cast<std::size_t>(std::ceil(quantile_level * static_cast<double>(n))) - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(pos), sorted.end());
    const double x = sorted[pos];

    std::size_t sum_exceed = 0;
    std::size_t max_exceed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        if (sums[row] > x) ++sum_exceed;
        if (maxima[row] > x) ++max_exceed;
    }
    if (sum_exceed == 0) throw DegenerateError("max_sum_tail_ratio: no row sum exceeds the threshold");
    return static_cast<double>(max_exceed) / static_cast<double>(sum_exceed);
}

}  // namespace tailcause
