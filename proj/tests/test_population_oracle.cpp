#include <doctest.h>

#include <cmath>

#include "tailcause/error.hpp"
#include "tailcause/population_oracle.hpp"

using namespace tailcause;

namespace {

std::vector<NoiseSpec> noise(int p, double alpha, NoiseFamily family = NoiseFamily::student_t) {
    return std::vector<NoiseSpec>(static_cast<std::size_t>(p), NoiseSpec{family, alpha, 1.0, 1.0});
}

Scm positive(int p, std::vector<WeightedEdge> edges, double alpha = 1.0) {
    return Scm(p, std::move(edges), noise(p, alpha), CoefficientMode::positive_coefficients);
}

// Independent brute force: enumerate ancestor sets directly from the edge list.
double gamma_brute(const Scm& scm, int j, int k) {
    const auto h = path_weights(scm);
    const double a = scm.alpha();
    double num = 0.0;
    double den = 0.0;
    for (int v = 0; v < scm.size(); ++v) {
        if (h(j, v) == 0.0) continue;
        const double w = std::pow(h(j, v), a);
        den += w;
        if (h(k, v) != 0.0) num += w;
    }
    return 0.5 + 0.5 * num / den;
}

}  // namespace

TEST_CASE("gamma: worked values") {
    CHECK(gamma_population(positive(2, {}))(0, 1) == 0.5);

    const auto d = gamma_population(positive(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}}));
    CHECK(d(0, 3) == 1.0);
    CHECK(d(3, 0) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(std::isnan(d(1, 1)));

    const auto chain = gamma_population(positive(2, {{0, 1, 1}}));
    CHECK(chain(1, 0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(chain(0, 1) == 1.0);
}

TEST_CASE("gamma: matches a brute-force evaluation") {
    RandomScmConfig cfg;
    cfg.mode = CoefficientMode::positive_coefficients;
    for (double alpha : {0.7, 1.0, 2.5}) {
        for (std::uint64_t s = 0; s < 40; ++s) {
            const Scm scm = random_scm(7, alpha, cfg, s);
            const auto g = gamma_population(scm);
            for (int j = 0; j < 7; ++j)
                for (int k = 0; k < 7; ++k)
                    if (j != k) CHECK(g(j, k) == doctest::Approx(gamma_brute(scm, j, k)).epsilon(1e-10));
        }
    }
}

TEST_CASE("gamma: preconditions") {
    const Scm real(2, {{0, 1, -0.5}}, noise(2, 2.0), CoefficientMode::real_coefficients);
    CHECK_THROWS_AS(gamma_population(real), ModeError);
    auto hetero = noise(2, 2.0);
    hetero[1].scale_upper = 2.0;
    hetero[1].scale_lower = 2.0;
    CHECK_THROWS_AS(gamma_population(Scm(2, {{0, 1, 0.5}}, hetero, CoefficientMode::positive_coefficients)), ModeError);
}

TEST_CASE("psi: worked values") {
    const Scm neg(2, {{0, 1, -0.7}}, noise(2, 2.0), CoefficientMode::real_coefficients);
    const auto p = psi_population(neg);
    CHECK(p(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi_population(positive(2, {}, 2.0))(0, 1) == 0.5);

    const Scm cancel(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, -1}}, noise(4, 2.0), CoefficientMode::real_coefficients);
    CHECK_THROWS_AS(psi_population(cancel), ValidationError);

    const Scm one_sided(2, {{0, 1, 0.5}}, noise(2, 2.0, NoiseFamily::shifted_pareto),
                        CoefficientMode::positive_coefficients);
    CHECK_THROWS_AS(psi_population(one_sided), ModeError);
}

TEST_CASE("psi equals gamma for symmetric noise and positive coefficients") {
    RandomScmConfig cfg;
    cfg.mode = CoefficientMode::positive_coefficients;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Scm scm = random_scm(6, 1.5, cfg, s);
        const auto g = gamma_population(scm);
        const auto p = psi_population(scm);
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                if (j != k) CHECK(p(j, k) == doctest::Approx(g(j, k)).epsilon(1e-12));
    }
}

TEST_CASE("coefficients lie in [1/2, 1] with the structural equalities") {
    RandomScmConfig pos;
    pos.mode = CoefficientMode::positive_coefficients;
    int checked = 0;
    for (int p = 2; p <= 8; ++p) {
        for (double alpha : {1.0, 1.5, 2.5}) {
            for (std::uint64_t s = 0; s < 25; ++s) {
                const Scm scm = random_scm(p, alpha, pos, 1000 * static_cast<std::uint64_t>(p) + s);
                const Scm real = random_scm(p, alpha, {}, 1000 * static_cast<std::uint64_t>(p) + s);
                const auto g = gamma_population(scm);
                const auto y = psi_population(real);
                for (int j = 0; j < p; ++j) {
                    for (int k = 0; k < p; ++k) {
                        if (j == k) continue;
                        CHECK(g(j, k) >= 0.5);
                        CHECK(g(j, k) <= 1.0);
                        CHECK(y(j, k) >= 0.5 - 1e-12);
                        CHECK(y(j, k) <= 1.0 + 1e-12);
                        // j an ancestor of k (An(j) inside An(k)) <=> gamma = 1.
                        CHECK((g(j, k) == 1.0) == scm.dag().is_ancestor(j, k));
                        bool shared = false;
                        for (int h = 0; h < p; ++h)
                            shared = shared || (scm.dag().is_ancestor(h, j) && scm.dag().is_ancestor(h, k));
                        CHECK((g(j, k) == 0.5) == !shared);
                        CHECK(classify_pair(g, j, k) == true_relation(scm.dag(), j, k));
                        CHECK(classify_pair(y, j, k) == true_relation(real.dag(), j, k));
                        ++checked;
                    }
                }
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("classify_pair examples") {
    CoefMatrix m;
    m.values = Eigen::MatrixXd::Constant(2, 2, std::nan(""));
    auto set = [&](double ij, double ji) {
        m.values(0, 1) = ij;
        m.values(1, 0) = ji;
        return classify_pair(m, 0, 1);
    };
    CHECK(set(1.0, 0.7) == PairRelation::i_causes_j);
    CHECK(set(0.7, 1.0) == PairRelation::j_causes_i);
    CHECK(set(0.6, 0.8) == PairRelation::common_cause);
    CHECK(set(0.5, 0.5) == PairRelation::no_causal_link);
    CHECK(set(0.5 + 1e-12, 0.5) == PairRelation::no_causal_link);
    CHECK(set(1.0, 1.0) == PairRelation::indeterminate);
    CHECK(set(0.3, 0.6) == PairRelation::indeterminate);
    CHECK_THROWS_AS(classify_pair(m, 0, 1, 0.3), ValidationError);
}

TEST_CASE("true_relation") {
    const Dag d(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    CHECK(true_relation(d, 0, 3) == PairRelation::i_causes_j);
    CHECK(true_relation(d, 3, 0) == PairRelation::j_causes_i);
    CHECK(true_relation(d, 1, 2) == PairRelation::common_cause);
    CHECK(true_relation(Dag(2, {}), 0, 1) == PairRelation::no_causal_link);
}

TEST_CASE("mistake bound margin") {
    CHECK(mistake_bound_margin(positive(2, {{0, 1, 1}})) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(mistake_bound_margin(positive(3, {})) == 0.5);
    CHECK_THROWS_AS(mistake_bound_margin(positive(1, {})), ValidationError);
    RandomScmConfig cfg;
    cfg.mode = CoefficientMode::positive_coefficients;
    for (std::uint64_t s = 0; s < 50; ++s) CHECK(mistake_bound_margin(random_scm(6, 2.0, cfg, s)) < 1.0);
}
