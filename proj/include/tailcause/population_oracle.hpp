#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tailcause/scm_graph.hpp"

namespace tailcause {

enum class CoefKind { gamma, psi };
std::string_view to_string(CoefKind kind);
CoefKind coef_kind_from_string(std::string_view name);

// p x p matrix of causal tail coefficients; values(i, j) is the coefficient
// from i to j (the expectation of j's rescaled margin given i is extreme).
// The diagonal is NaN.
struct CoefMatrix {
    Eigen::MatrixXd values;
    CoefKind kind = CoefKind::gamma;
    std::vector<std::string> names;

    int size() const { return static_cast<int>(values.rows()); }
    double operator()(int i, int j) const { return values(i, j); }
};

// Sub-matrix over `nodes` (in the given order), names carried along.
CoefMatrix restrict_to(const CoefMatrix& coefs, std::span<const Node> nodes);

// Closed-form Gamma over all nodes of a positive-coefficient SCM:
//   Gamma_jk = 1/2 + 1/2 * sum_{h in An(j) & An(k)} c_h H_jh^alpha / sum_{h in An(j)} c_h H_jh^alpha.
// Requires equal upper tail constants across nodes (ModeError otherwise).
CoefMatrix gamma_population(const Scm& scm);

// Closed-form Psi (upper and lower tails, sign-flipped scale constants).
// Requires path-faithfulness (ValidationError) and two-sided noise (ModeError).
CoefMatrix psi_population(const Scm& scm);

enum class PairRelation { i_causes_j, j_causes_i, common_cause, no_causal_link, indeterminate };
std::string_view to_string(PairRelation relation);

// Reads (coefs(i,j), coefs(j,i)) against the table of possible values: within
// tol of 1 counts as 1, within tol of 1/2 as 1/2, values in between as interior.
PairRelation classify_pair(const CoefMatrix& coefs, int i, int j, double tol = 1e-9);

// Graph-truth relation for (i, j): the cell classify_pair should land in.
PairRelation true_relation(const Dag& dag, Node i, Node j);

// max over ordered pairs (i, j), i not in an(j), of Gamma_ij.
double mistake_bound_margin(const Scm& scm);

}  // namespace tailcause
