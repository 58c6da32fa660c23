#pragma once

#include <cstdint>
#include <vector>

#include "tailcause/estimators.hpp"
#include "tailcause/population_oracle.hpp"
#include "tailcause/scm_graph.hpp"
#include "tailcause/simulator.hpp"

namespace tailcause {

// Extremal ancestral search. At each step every remaining node i is scored by
// its largest incoming coefficient max_{j remaining, j != i} coefs(j, i), and
// the node with the smallest score is ranked next. Ties go to the smallest
// index. Accepts gamma and psi matrices; the diagonal is ignored.
CausalOrder ease(const CoefMatrix& coefs);

struct EaseStep {
    std::vector<Node> remaining;  // ascending
    std::vector<double> scores;   // aligned with `remaining`
    Node chosen = 0;
};

std::vector<EaseStep> ease_trace(const CoefMatrix& coefs);

struct MistakeRate {
    double rate = 0.0;             // fraction of replicates with an invalid order
    double mean_violations = 0.0;  // mean count of reversed ancestral pairs
};

// Simulates `reps` datasets from `scm` (linear setting unless given), estimates
// config.kind coefficients, runs ease and checks the order on observed nodes.
// Replicate r uses derive_seed(seed, {r}); results do not depend on `threads`.
MistakeRate mistake_rate(const Scm& scm, std::size_t n, const EstimatorConfig& config, std::size_t reps,
                         std::uint64_t seed, const SimSetting& setting = {}, unsigned threads = 1);

}  // namespace tailcause
