#include "tailcause/scm_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

#include "tailcause/error.hpp"

namespace tailcause {

namespace {

void check_node(int p, Node j, const char* what) {
    if (j < 0 || j >= p)
        throw ValidationError(std::string(what) + ": node " + std::to_string(j) + " out of range [0, " +
                              std::to_string(p) + ")");
}

}  // namespace

// ---------------------------------------------------------------------------
// Dag

Dag::Dag(int p, std::vector<Edge> edges) : p_(p), edges_(std::move(edges)) {
    if (p < 0) throw ValidationError("Dag: negative node count");
    const auto np = static_cast<std::size_t>(p);
    parents_.assign(np, {});
    children_.assign(np, {});
    for (const auto& [parent, child] : edges_) {
        check_node(p, parent, "Dag");
        check_node(p, child, "Dag");
        if (parent == child) throw ValidationError("Dag: self-loop on node " + std::to_string(parent));
        auto& pa = parents_[static_cast<std::size_t>(child)];
        if (std::find(pa.begin(), pa.end(), parent) != pa.end())
            throw ValidationError("Dag: duplicate edge " + std::to_string(parent) + " -> " +
                                  std::to_string(child));
        pa.push_back(parent);
        children_[static_cast<std::size_t>(parent)].push_back(child);
    }
    for (auto& v : parents_) std::sort(v.begin(), v.end());
    for (auto& v : children_) std::sort(v.begin(), v.end());

    std::vector<int> indegree(np);
    for (std::size_t j = 0; j < np; ++j) indegree[j] = static_cast<int>(parents_[j].size());
    std::priority_queue<Node, std::vector<Node>, std::greater<>> ready;
    for (Node j = 0; j < p; ++j)
        if (indegree[static_cast<std::size_t>(j)] == 0) ready.push(j);
    topo_.reserve(np);
    while (!ready.empty()) {
        const Node j = ready.top();
        ready.pop();
        topo_.push_back(j);
        for (Node c : children_[static_cast<std::size_t>(j)])
            if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
    if (topo_.size() != np) throw ValidationError("Dag: graph contains a directed cycle");

    ancestor_.assign(np, std::vector<char>(np, 0));
    for (Node j : topo_) {
        auto& row = ancestor_[static_cast<std::size_t>(j)];
        row[static_cast<std::size_t>(j)] = 1;
        for (Node k : parents_[static_cast<std::size_t>(j)]) {
            const auto& prow = ancestor_[static_cast<std::size_t>(k)];
            for (std::size_t h = 0; h < np; ++h) row[h] = static_cast<char>(row[h] | prow[h]);
        }
    }
}

bool Dag::has_edge(Node parent, Node child) const {
    const auto& pa = parents(child);
    return std::binary_search(pa.begin(), pa.end(), parent);
}

bool Dag::is_ancestor(Node k, Node j) const {
    check_node(p_, k, "is_ancestor");
    check_node(p_, j, "is_ancestor");
    return ancestor_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] != 0;
}

std::vector<Node> ancestors(const Dag& dag, Node j) {
    check_node(dag.size(), j, "ancestors");
    std::vector<Node> out;
    for (Node k = 0; k < dag.size(); ++k)
        if (dag.is_ancestor(k, j)) out.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------
// CausalOrder

CausalOrder CausalOrder::from_positions(std::vector<int> position) {
    std::vector<char> seen(position.size(), 0);
    for (int r : position) {
        if (r < 0 || static_cast<std::size_t>(r) >= position.size() || seen[static_cast<std::size_t>(r)])
            throw ValidationError("CausalOrder: positions are not a permutation");
        seen[static_cast<std::size_t>(r)] = 1;
    }
    return CausalOrder(std::move(position));
}

CausalOrder CausalOrder::from_sequence(std::span<const Node> sequence) {
    std::vector<int> position(sequence.size(), -1);
    for (std::size_t r = 0; r < sequence.size(); ++r) {
        const Node i = sequence[r];
        if (i < 0 || static_cast<std::size_t>(i) >= sequence.size() || position[static_cast<std::size_t>(i)] != -1)
            throw ValidationError("CausalOrder: sequence is not a permutation");
        position[static_cast<std::size_t>(i)] = static_cast<int>(r);
    }
    return CausalOrder(std::move(position));
}

CausalOrder CausalOrder::identity(int p) {
    std::vector<int> position(static_cast<std::size_t>(p));
    std::iota(position.begin(), position.end(), 0);
    return CausalOrder(std::move(position));
}

std::vector<Node> CausalOrder::sequence() const {
    std::vector<Node> seq(position_.size());
    for (std::size_t i = 0; i < position_.size(); ++i) seq[static_cast<std::size_t>(position_[i])] = static_cast<Node>(i);
    return seq;
}

// ---------------------------------------------------------------------------
// Scm

std::string_view to_string(CoefficientMode mode) {
    return mode == CoefficientMode::positive_coefficients ? "positive_coefficients" : "real_coefficients";
}

CoefficientMode coefficient_mode_from_string(std::string_view name) {
    if (name == "positive_coefficients") return CoefficientMode::positive_coefficients;
    if (name == "real_coefficients") return CoefficientMode::real_coefficients;
    throw ValidationError("unknown coefficient mode '" + std::string(name) + "'");
}

Scm::Scm(int p, std::vector<WeightedEdge> edges, std::vector<NoiseSpec> noise, CoefficientMode mode,
         std::vector<Node> hidden, std::vector<std::string> names)
    : noise_(std::move(noise)), mode_(mode), hidden_(std::move(hidden)), names_(std::move(names)) {
    if (p < 1) throw ValidationError("Scm: need at least one node");
    std::vector<Edge> plain;
    plain.reserve(edges.size());
    for (const auto& e : edges) plain.emplace_back(e.parent, e.child);
    dag_ = Dag(p, std::move(plain));

    b_ = Eigen::MatrixXd::Zero(p, p);
    for (const auto& e : edges) {
        if (e.beta == 0.0 || !std::isfinite(e.beta))
            throw ValidationError("Scm: edge coefficients must be finite and nonzero");
        if (mode_ == CoefficientMode::positive_coefficients && e.beta < 0.0)
            throw ValidationError("Scm: negative coefficient in positive_coefficients mode");
        b_(e.child, e.parent) = e.beta;
    }

    if (noise_.size() != static_cast<std::size_t>(p))
        throw ValidationError("Scm: need one noise spec per node");
    for (const auto& spec : noise_) {
        spec.validate();
        if (spec.alpha != noise_.front().alpha)
            throw ValidationError("Scm: all noise terms must share one tail index");
    }

    std::sort(hidden_.begin(), hidden_.end());
    if (std::adjacent_find(hidden_.begin(), hidden_.end()) != hidden_.end())
        throw ValidationError("Scm: duplicate hidden node");
    for (Node h : hidden_) check_node(p, h, "Scm hidden");

    if (names_.empty()) {
        for (int j = 0; j < p; ++j) names_.push_back("X" + std::to_string(j + 1));
    } else if (names_.size() != static_cast<std::size_t>(p)) {
        throw ValidationError("Scm: names must have one entry per node");
    }
}

bool Scm::is_hidden(Node j) const { return std::binary_search(hidden_.begin(), hidden_.end(), j); }

std::vector<Node> Scm::observed() const {
    std::vector<Node> out;
    for (Node j = 0; j < size(); ++j)
        if (!is_hidden(j)) out.push_back(j);
    return out;
}

std::vector<WeightedEdge> Scm::weighted_edges() const {
    std::vector<WeightedEdge> out;
    for (Node child = 0; child < size(); ++child)
        for (Node parent : dag_.parents(child)) out.push_back({parent, child, b_(child, parent)});
    return out;
}

Eigen::MatrixXd path_weights(const Scm& scm) {
    const int p = scm.size();
    const auto& b = scm.coefficients();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p, p);
    for (Node j : scm.dag().topological_order()) {
        h(j, j) = 1.0;
        for (Node k : scm.dag().parents(j)) h.row(j) += b(j, k) * h.row(k);
    }
    return h;
}

bool path_faithful(const Scm& scm, const Eigen::MatrixXd& h, double tol) {
    const int p = scm.size();
    for (Node j = 0; j < p; ++j)
        for (Node k = 0; k < p; ++k)
            if (scm.dag().is_ancestor(k, j) && !(std::abs(h(j, k)) > tol)) return false;
    return true;
}

OrderValidation validate_order(const Dag& dag, const CausalOrder& order,
                               std::optional<std::span<const Node>> observed) {
    std::vector<Node> nodes;
    if (observed) {
        nodes.assign(observed->begin(), observed->end());
        for (Node v : nodes) check_node(dag.size(), v, "validate_order");
    } else {
        nodes.resize(static_cast<std::size_t>(dag.size()));
        std::iota(nodes.begin(), nodes.end(), 0);
    }
    if (static_cast<std::size_t>(order.size()) != nodes.size())
        throw ValidationError("validate_order: order size " + std::to_string(order.size()) +
                              " does not match node count " + std::to_string(nodes.size()));

    OrderValidation result;
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t d = 0; d < nodes.size(); ++d)
            if (a != d && dag.is_ancestor(nodes[a], nodes[d]) &&
                order.position(static_cast<Node>(a)) > order.position(static_cast<Node>(d)))
                result.violations.emplace_back(nodes[a], nodes[d]);
    result.valid = result.violations.empty();
    return result;
}

// ---------------------------------------------------------------------------
// Random SCMs

std::string_view to_string(CoefficientLaw law) {
    return law == CoefficientLaw::intervals ? "intervals" : "four_point";
}

CoefficientLaw coefficient_law_from_string(std::string_view name) {
    if (name == "intervals") return CoefficientLaw::intervals;
    if (name == "four_point") return CoefficientLaw::four_point;
    throw ValidationError("unknown coefficient law '" + std::string(name) + "'");
}

namespace {

double draw_coefficient(std::mt19937_64& rng, const RandomScmConfig& config) {
    double magnitude = 0.0;
    if (config.coefficient_law == CoefficientLaw::intervals) {
        magnitude = std::uniform_real_distribution<double>(config.coef_min, config.coef_max)(rng);
    } else {
        magnitude = std::bernoulli_distribution(0.5)(rng) ? config.coef_max : config.coef_min;
    }
    if (config.mode == CoefficientMode::positive_coefficients) return magnitude;
    return std::bernoulli_distribution(0.5)(rng) ? magnitude : -magnitude;
}

// First `count` entries of `pool` become a uniform sample without replacement.
template <typename T>
void partial_shuffle(std::vector<T>& pool, std::size_t count, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
}

}  // namespace

Scm random_scm(int p, double alpha, const RandomScmConfig& config, std::uint64_t seed) {
    if (p < 1) throw ValidationError("random_scm: p must be at least 1");
    if (!(alpha > 0.0)) throw ValidationError("random_scm: alpha must be positive");
    if (!(config.coef_min > 0.0 && config.coef_min <= config.coef_max))
        throw ValidationError("random_scm: need 0 < coef_min <= coef_max");

    std::mt19937_64 rng(seed);
    const double q = p > 1 ? std::min(5.0 / (p - 1), 0.5) : 0.5;

    for (int attempt = 0; attempt <= config.max_resamples; ++attempt) {
        std::vector<Node> sequence(static_cast<std::size_t>(p));
        std::iota(sequence.begin(), sequence.end(), 0);
        std::shuffle(sequence.begin(), sequence.end(), rng);

        std::vector<WeightedEdge> edges;
        for (int rank = 1; rank < p; ++rank) {
            const Node child = sequence[static_cast<std::size_t>(rank)];
            const auto n_parents = static_cast<std::size_t>(std::binomial_distribution<int>(rank, q)(rng));
            std::vector<Node> pool(sequence.begin(), sequence.begin() + rank);
            partial_shuffle(pool, n_parents, rng);
            for (std::size_t i = 0; i < n_parents; ++i)
                edges.push_back({pool[i], child, draw_coefficient(rng, config)});
        }

        int total = p;
        std::vector<Node> hidden;
        if (config.hidden_confounders && p >= 2) {
            const int n_pairs = p * (p - 1) / 2;
            const double q_conf = 2.0 / (3.0 * p - 3.0);
            const auto n_conf = static_cast<std::size_t>(std::binomial_distribution<int>(n_pairs, q_conf)(rng));
            std::vector<Edge> pairs;
            for (Node i = 0; i < p; ++i)
                for (Node j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
            partial_shuffle(pairs, n_conf, rng);
            for (std::size_t c = 0; c < n_conf; ++c) {
                const Node h = total++;
                hidden.push_back(h);
                edges.push_back({h, pairs[c].first, draw_coefficient(rng, config)});
                edges.push_back({h, pairs[c].second, draw_coefficient(rng, config)});
            }
        }

        std::vector<NoiseSpec> noise(static_cast<std::size_t>(total),
                                     NoiseSpec{config.noise_family, alpha, 1.0, 1.0});
        std::vector<std::string> names;
        for (int j = 0; j < total; ++j)
            names.push_back((j < p ? "X" : "H") + std::to_string(j < p ? j + 1 : j - p + 1));
        Scm scm(total, std::move(edges), std::move(noise), config.mode, std::move(hidden), std::move(names));

        if (config.mode == CoefficientMode::positive_coefficients || path_faithful(scm, path_weights(scm)))
            return scm;
    }
    throw CapacityError("random_scm: no path-faithful SCM within the resampling budget");
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

void extend_orders(const Dag& dag, std::vector<int>& indegree, std::vector<char>& used,
                   std::vector<Node>& prefix, std::vector<CausalOrder>& out) {
    const int p = dag.size();
    if (static_cast<int>(prefix.size()) == p) {
        out.push_back(CausalOrder::from_sequence(prefix));
        return;
    }
    for (Node j = 0; j < p; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (used[uj] || indegree[uj] != 0) continue;
        used[uj] = 1;
        prefix.push_back(j);
        for (Node c : dag.children(j)) --indegree[static_cast<std::size_t>(c)];
        extend_orders(dag, indegree, used, prefix, out);
        for (Node c : dag.children(j)) ++indegree[static_cast<std::size_t>(c)];
        prefix.pop_back();
        used[uj] = 0;
    }
}

}  // namespace

std::vector<CausalOrder> all_causal_orders(const Dag& dag) {
    if (dag.size() > 10) throw CapacityError("all_causal_orders: p > 10 is not enumerable");
    const auto np = static_cast<std::size_t>(dag.size());
    std::vector<int> indegree(np);
    for (Node j = 0; j < dag.size(); ++j) indegree[static_cast<std::size_t>(j)] = static_cast<int>(dag.parents(j).size());
    std::vector<char> used(np, 0);
    std::vector<Node> prefix;
    std::vector<CausalOrder> out;
    extend_orders(dag, indegree, used, prefix, out);
    return out;
}

}  // namespace tailcause
