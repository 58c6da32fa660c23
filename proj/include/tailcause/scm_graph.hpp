#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tailcause/heavy_tails.hpp"

namespace tailcause {

using Node = int;  // 0-based node index
using Edge = std::pair<Node, Node>;  // (parent, child)

// Directed acyclic graph over nodes 0..p-1.
class Dag {
public:
    Dag() = default;
    // Throws ValidationError on out-of-range nodes, self-loops, duplicate edges or cycles.
    Dag(int p, std::vector<Edge> edges);

    int size() const { return p_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Node>& parents(Node j) const { return parents_.at(static_cast<std::size_t>(j)); }
    const std::vector<Node>& children(Node j) const { return children_.at(static_cast<std::size_t>(j)); }
    bool has_edge(Node parent, Node child) const;

    // Kahn order, smallest ready index first.
    const std::vector<Node>& topological_order() const { return topo_; }

    // is_ancestor(k, j): k in An(j), i.e. k == j or a directed path k -> j exists.
    bool is_ancestor(Node k, Node j) const;

private:
    int p_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Node>> parents_;
    std::vector<std::vector<Node>> children_;
    std::vector<Node> topo_;
    std::vector<std::vector<char>> ancestor_;  // ancestor_[j][k] = k in An(j)
};

// An(j, G), including j itself, sorted ascending.
std::vector<Node> ancestors(const Dag& dag, Node j);

// Permutation of nodes. position[i] is the 0-based rank of node i (pi);
// sequence() lists nodes by rank (pi^-1).
class CausalOrder {
public:
    CausalOrder() = default;
    static CausalOrder from_positions(std::vector<int> position);
    static CausalOrder from_sequence(std::span<const Node> sequence);
    static CausalOrder identity(int p);

    int size() const { return static_cast<int>(position_.size()); }
    int position(Node i) const { return position_.at(static_cast<std::size_t>(i)); }
    const std::vector<int>& positions() const { return position_; }
    std::vector<Node> sequence() const;

    friend bool operator==(const CausalOrder&, const CausalOrder&) = default;

private:
    explicit CausalOrder(std::vector<int> position) : position_(std::move(position)) {}
    std::vector<int> position_;
};

enum class CoefficientMode { positive_coefficients, real_coefficients };
std::string_view to_string(CoefficientMode mode);
CoefficientMode coefficient_mode_from_string(std::string_view name);

struct WeightedEdge {
    Node parent = 0;
    Node child = 0;
    double beta = 0.0;
};

// Linear SCM X_j = sum_{k in pa(j)} B(j,k) X_k + eps_j over a DAG.
class Scm {
public:
    Scm() = default;
    // Validates: nonzero coefficients, positivity in positive mode, one shared
    // tail index, hidden indices in range. Names default to X1..Xp.
    Scm(int p, std::vector<WeightedEdge> edges, std::vector<NoiseSpec> noise, CoefficientMode mode,
        std::vector<Node> hidden = {}, std::vector<std::string> names = {});

    int size() const { return dag_.size(); }
    const Dag& dag() const { return dag_; }
    // B(child, parent) = beta.
    const Eigen::MatrixXd& coefficients() const { return b_; }
    double beta(Node parent, Node child) const { return b_(child, parent); }
    const std::vector<NoiseSpec>& noise() const { return noise_; }
    CoefficientMode mode() const { return mode_; }
    double alpha() const { return noise_.empty() ? 0.0 : noise_.front().alpha; }
    const std::vector<Node>& hidden() const { return hidden_; }
    bool is_hidden(Node j) const;
    // Observed nodes in ascending index order.
    std::vector<Node> observed() const;
    const std::vector<std::string>& names() const { return names_; }
    std::vector<WeightedEdge> weighted_edges() const;

private:
    Dag dag_;
    Eigen::MatrixXd b_;
    std::vector<NoiseSpec> noise_;
    CoefficientMode mode_ = CoefficientMode::positive_coefficients;
    std::vector<Node> hidden_;
    std::vector<std::string> names_;
};

// H = (I - B)^-1, H(j,k) = sum of weighted directed paths k -> j, diagonal 1.
// Back-substitution along a topological order.
Eigen::MatrixXd path_weights(const Scm& scm);

// True when every ancestor k of j has |H(j,k)| > tol.
bool path_faithful(const Scm& scm, const Eigen::MatrixXd& h, double tol = 1e-12);

struct OrderValidation {
    bool valid = true;
    std::vector<Edge> violations;  // (ancestor, descendant) pairs ranked backwards
};

// Checks pi(i) < pi(j) for every i in an(j). With `observed` given, the order
// ranks only those nodes (order index r refers to observed[r]) and ancestry is
// taken in the full graph.
OrderValidation validate_order(const Dag& dag, const CausalOrder& order,
                               std::optional<std::span<const Node>> observed = std::nullopt);

enum class CoefficientLaw { intervals, four_point };
std::string_view to_string(CoefficientLaw law);
CoefficientLaw coefficient_law_from_string(std::string_view name);

struct RandomScmConfig {
    CoefficientMode mode = CoefficientMode::real_coefficients;
    CoefficientLaw coefficient_law = CoefficientLaw::intervals;
    double coef_min = 0.1;
    double coef_max = 0.9;
    bool hidden_confounders = false;
    NoiseFamily noise_family = NoiseFamily::student_t;
    int max_resamples = 1000;  // path-faithfulness rejection budget
};

// Random SCM: random causal order, Bin(rank, q) parents with q = min(5/(p-1), 1/2),
// coefficients uniform on [-max,-min] U [min,max] (or the four endpoints), and
// optionally parentless hidden confounders (nodes p.., flagged hidden) over
// Bin(p(p-1)/2, 2/(3p-3)) observed pairs.
Scm random_scm(int p, double alpha, const RandomScmConfig& config, std::uint64_t seed);

// Every causal order of `dag`, sorted by sequence. Throws CapacityError for p > 10.
std::vector<CausalOrder> all_causal_orders(const Dag& dag);

}  // namespace tailcause
