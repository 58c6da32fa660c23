#include "tailcause/population_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailcause/error.hpp"

namespace tailcause {

std::string_view to_string(CoefKind kind) { return kind == CoefKind::gamma ? "gamma" : "psi"; }

CoefKind coef_kind_from_string(std::string_view name) {
    if (name == "gamma") return CoefKind::gamma;
    if (name == "psi") return CoefKind::psi;
    throw ValidationError("unknown coefficient kind '" + std::string(name) + "'");
}

std::string_view to_string(PairRelation relation) {
    switch (relation) {
        case PairRelation::i_causes_j: return "i_causes_j";
        case PairRelation::j_causes_i: return "j_causes_i";
        case PairRelation::common_cause: return "common_cause";
        case PairRelation::no_causal_link: return "no_causal_link";
        case PairRelation::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

CoefMatrix restrict_to(const CoefMatrix& coefs, std::span<const Node> nodes) {
    const auto m = static_cast<Eigen::Index>(nodes.size());
    CoefMatrix out;
    out.kind = coefs.kind;
    out.values.resize(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const Node na = nodes[static_cast<std::size_t>(a)];
        if (na < 0 || na >= coefs.size()) throw ValidationError("restrict_to: node out of range");
        for (Eigen::Index b = 0; b < m; ++b) out.values(a, b) = coefs.values(na, nodes[static_cast<std::size_t>(b)]);
        if (!coefs.names.empty()) out.names.push_back(coefs.names[static_cast<std::size_t>(na)]);
    }
    return out;
}

namespace {

// log(c * |w|^alpha); -inf for a zero weight, which contributes nothing.
double log_term(double c, double weight, double alpha) {
    if (weight == 0.0 || c == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(c) + alpha * std::log(std::abs(weight));
}

// sum_{h in subset} exp(logs[h]) / sum_{h in all} exp(logs[h]), scaled by the max term.
double log_space_ratio(const std::vector<double>& logs, const std::vector<char>& in_subset,
                       const std::vector<char>& in_all) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < logs.size(); ++h)
        if (in_all[h]) top = std::max(top, logs[h]);
    if (!std::isfinite(top)) throw DegenerateError("population coefficient: all ancestor weights vanish");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t h = 0; h < logs.size(); ++h) {
        if (!in_all[h] || !std::isfinite(logs[h])) continue;
        const double t = std::exp(logs[h] - top);
        den += t;
        if (in_subset[h]) num += t;
    }
    return num / den;
}

CoefMatrix named_matrix(const Scm& scm, CoefKind kind) {
    const int p = scm.size();
    CoefMatrix out;
    out.kind = kind;
    out.values = Eigen::MatrixXd::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
    out.names = scm.names();
    return out;
}

}  // namespace

CoefMatrix gamma_population(const Scm& scm) {
    if (scm.mode() != CoefficientMode::positive_coefficients)
        throw ModeError("gamma_population: requires positive_coefficients mode; use psi_population");
    const int p = scm.size();
    const auto np = static_cast<std::size_t>(p);
    const double alpha = scm.alpha();

    std::vector<double> c(np);
    for (std::size_t h = 0; h < np; ++h) c[h] = tail_constants(scm.noise()[h]).upper;
    for (double ch : c)
        if (std::abs(ch - c.front()) > 1e-12 * c.front())
            throw ModeError("gamma_population: heterogeneous tail constants; use psi_population");

    const Eigen::MatrixXd h = path_weights(scm);
    const Dag& dag = scm.dag();
    CoefMatrix out = named_matrix(scm, CoefKind::gamma);

    std::vector<double> logs(np);
    std::vector<char> an_j(np);
    std::vector<char> common(np);
    for (Node j = 0; j < p; ++j) {
        for (Node a = 0; a < p; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            an_j[ua] = static_cast<char>(dag.is_ancestor(a, j));
            logs[ua] = log_term(c[ua], h(j, a), alpha);
        }
        for (Node k = 0; k < p; ++k) {
            if (k == j) continue;
            for (Node a = 0; a < p; ++a)
                common[static_cast<std::size_t>(a)] = static_cast<char>(an_j[static_cast<std::size_t>(a)] && dag.is_ancestor(a, k));
            out.values(j, k) = 0.5 + 0.5 * log_space_ratio(logs, common, an_j);
        }
    }
    return out;
}

CoefMatrix psi_population(const Scm& scm) {
    const int p = scm.size();
    const auto np = static_cast<std::size_t>(p);
    const double alpha = scm.alpha();

    std::vector<TailConstants> c(np);
    for (std::size_t h = 0; h < np; ++h) {
        c[h] = tail_constants(scm.noise()[h]);
        if (!(c[h].upper > 0.0 && c[h].lower > 0.0))
            throw ModeError("psi_population: every noise term needs both tails (shifted_pareto is one-sided)");
    }

    const Eigen::MatrixXd h = path_weights(scm);
    if (!path_faithful(scm, h))
        throw ValidationError("psi_population: SCM is not path-faithful (an ancestor path weight vanishes)");
    const Dag& dag = scm.dag();
    CoefMatrix out = named_matrix(scm, CoefKind::psi);

    std::vector<double> logs_up(np);
    std::vector<double> logs_low(np);
    std::vector<char> an_j(np);
    std::vector<char> common(np);
    for (Node j = 0; j < p; ++j) {
        for (Node a = 0; a < p; ++a) {
            const auto ua = static_cast<std::size_t>(a);
            an_j[ua] = static_cast<char>(dag.is_ancestor(a, j));
            const double w = h(j, a);
            // A negative path weight swaps which noise tail drives each tail of X_j.
            const double c_up = w > 0.0 ? c[ua].upper : c[ua].lower;
            const double c_low = w > 0.0 ? c[ua].lower : c[ua].upper;
            logs_up[ua] = log_term(c_up, w, alpha);
            logs_low[ua] = log_term(c_low, w, alpha);
        }
        for (Node k = 0; k < p; ++k) {
            if (k == j) continue;
            for (Node a = 0; a < p; ++a)
                common[static_cast<std::size_t>(a)] = static_cast<char>(an_j[static_cast<std::size_t>(a)] && dag.is_ancestor(a, k));
            out.values(j, k) = 0.5 + 0.25 * log_space_ratio(logs_up, common, an_j) +
                               0.25 * log_space_ratio(logs_low, common, an_j);
        }
    }
    return out;
}

namespace {

enum class Level { one, interior, half, other };

Level level_of(double v, double tol) {
    if (std::abs(v - 1.0) <= tol) return Level::one;
    if (std::abs(v - 0.5) <= tol) return Level::half;
    if (v > 0.5 && v < 1.0) return Level::interior;
    return Level::other;
}

}  // namespace

PairRelation classify_pair(const CoefMatrix& coefs, int i, int j, double tol) {
    if (!(tol >= 0.0 && tol < 0.25)) throw ValidationError("classify_pair: tol must lie in [0, 0.25)");
    if (i < 0 || j < 0 || i >= coefs.size() || j >= coefs.size() || i == j)
        throw ValidationError("classify_pair: need two distinct in-range nodes");
    const Level ij = level_of(coefs(i, j), tol);
    const Level ji = level_of(coefs(j, i), tol);
    if (ij == Level::one && ji == Level::interior) return PairRelation::i_causes_j;
    if (ij == Level::interior && ji == Level::one) return PairRelation::j_causes_i;
    if (ij == Level::interior && ji == Level::interior) return PairRelation::common_cause;
    if (ij == Level::half && ji == Level::half) return PairRelation::no_causal_link;
    return PairRelation::indeterminate;
}

PairRelation true_relation(const Dag& dag, Node i, Node j) {
    if (dag.is_ancestor(i, j)) return PairRelation::i_causes_j;
    if (dag.is_ancestor(j, i)) return PairRelation::j_causes_i;
    for (Node h = 0; h < dag.size(); ++h)
        if (dag.is_ancestor(h, i) && dag.is_ancestor(h, j)) return PairRelation::common_cause;
    return PairRelation::no_causal_link;
}

double mistake_bound_margin(const Scm& scm) {
    if (scm.size() < 2) throw ValidationError("mistake_bound_margin: need at least two nodes");
    const CoefMatrix gamma = gamma_population(scm);
    double margin = -std::numeric_limits<double>::infinity();
    for (Node i = 0; i < scm.size(); ++i)
        for (Node j = 0; j < scm.size(); ++j)
            if (i != j && !scm.dag().is_ancestor(i, j)) margin = std::max(margin, gamma(i, j));
    return margin;
}

}  // namespace tailcause
