#include "tailcause/ease.hpp"

#include <cmath>
#include <limits>

#include "tailcause/error.hpp"
#include "tailcause/parallel.hpp"
#include "tailcause/seeding.hpp"

namespace tailcause {

std::vector<EaseStep> ease_trace(const CoefMatrix& coefs) {
    const int p = coefs.size();
    if (p < 1 || coefs.values.cols() != p) throw ValidationError("ease: need a non-empty square matrix");
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j && !std::isfinite(coefs(i, j)))
                throw ValidationError("ease: non-finite coefficient at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");

    std::vector<Node> remaining(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) remaining[static_cast<std::size_t>(i)] = i;

    std::vector<EaseStep> steps;
    steps.reserve(static_cast<std::size_t>(p));
    while (!remaining.empty()) {
        EaseStep step;
        step.remaining = remaining;
        step.scores.reserve(remaining.size());
        std::size_t best = 0;
        for (std::size_t a = 0; a < remaining.size(); ++a) {
            double score = -std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < remaining.size(); ++b)
                if (a != b) score = std::max(score, coefs(remaining[b], remaining[a]));
            step.scores.push_back(score);
            if (score < step.scores[best]) best = a;
        }
        step.chosen = remaining[best];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        steps.push_back(std::move(step));
    }
    return steps;
}

CausalOrder ease(const CoefMatrix& coefs) {
    const auto steps = ease_trace(coefs);
    std::vector<Node> sequence;
    sequence.reserve(steps.size());
    for (const auto& s : steps) sequence.push_back(s.chosen);
    return CausalOrder::from_sequence(sequence);
}

MistakeRate mistake_rate(const Scm& scm, std::size_t n, const EstimatorConfig& config, std::size_t reps,
                         std::uint64_t seed, const SimSetting& setting, unsigned threads) {
    if (reps < 1) throw ValidationError("mistake_rate: reps must be at least 1");
    const std::vector<Node> observed = scm.observed();
    std::vector<std::size_t> violations(reps);
    parallel_for(reps, threads, [&](std::size_t r) {
        if (observed.size() < 2) {
            violations[r] = 0;
            return;
        }
        const Simulation sim = simulate(scm, setting, n, derive_seed(seed, {r}));
        const CausalOrder order = ease(gamma_matrix(sim.data, config));
        violations[r] = validate_order(scm.dag(), order, observed).violations.size();
    });

    MistakeRate out;
    double total = 0.0;
    std::size_t invalid = 0;
    for (std::size_t v : violations) {
        total += static_cast<double>(v);
        if (v > 0) ++invalid;
    }
    out.rate = static_cast<double>(invalid) / static_cast<double>(reps);
    out.mean_violations = total / static_cast<double>(reps);
    return out;
}

}  // namespace tailcause
