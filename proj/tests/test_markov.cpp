#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfwet/markov.hpp"

using namespace cfwet;

TEST_CASE("per-interval consumption at reference parameters") {
    const NetworkConfig cfg;
    // 0.1*0.2s*3uW (pilot) + 0.3*0.2s*3uW (UL data) = 0.24 uJ
    CHECK(energy_consumption(cfg) == doctest::Approx(2.4e-7).epsilon(1e-12));
    NetworkConfig idle = cfg;
    idle.ul_power_w = 0.0;
    CHECK(energy_consumption(idle) == doctest::Approx(6e-8).epsilon(1e-12));
}

TEST_CASE("depletion probability for the exponential special case") {
    // Exponential harvested energy with mean 0.5 uJ against 0.24 uJ burn:
    // P(E <= E_C) = 1 - exp(-0.48).
    const GammaFit fit = gamma_fit(5e-7, 25e-14);
    CHECK(fit.shape == doctest::Approx(1.0));
    CHECK(prob_nonpositive_differential(2.4e-7, fit) ==
          doctest::Approx(1.0 - std::exp(-0.48)).epsilon(1e-12));
    CHECK(prob_nonpositive_differential(0.0, fit) == 0.0);
}

TEST_CASE("transition triple wiring") {
    const GammaFit fit = gamma_fit(5e-7, 25e-14);
    const double ec = 2.4e-7;
    const int m = 2000;
    const double ef = 0.1;
    const double diff = 5e-7 - ec;
    const TransitionTriple t = transition_triple(diff, ec, fit, m, ef);
    const double w = m * std::abs(diff) / ef;
    const double pm = 1.0 - std::exp(-0.48);
    CHECK(t.down == doctest::Approx(w * pm).epsilon(1e-12));
    CHECK(t.up == doctest::Approx(w * (1.0 - pm)).epsilon(1e-9));
    CHECK(t.down + t.stay + t.up == doctest::Approx(1.0).epsilon(1e-15));
    // Down pairs with the depletion probability, up with its complement.
    CHECK((t.up > t.down ? pm < 0.5 : pm >= 0.5));

    // Zero differential: no movement.
    const TransitionTriple z = transition_triple(0.0, ec, fit, m, ef);
    CHECK(z.down == 0.0);
    CHECK(z.stay == 1.0);
    CHECK(z.up == 0.0);

    // A differential exceeding one state quantum violates the chain model.
    CHECK_THROWS(transition_triple(1e-3, ec, fit, m, ef));
    CHECK_THROWS(transition_triple(diff, ec, fit, 1, ef));
    CHECK_THROWS(transition_triple(diff, ec, fit, m, 0.0));
}

TEST_CASE("three-state matrix with boundary folding") {
    const TransitionTriple t{0.2, 0.5, 0.3};
    const Eigen::MatrixXd p = build_transition_matrix({t, t, t});
    REQUIRE(p.rows() == 3);
    // Interior row is the triple verbatim.
    CHECK(p(1, 0) == doctest::Approx(0.2));
    CHECK(p(1, 1) == doctest::Approx(0.5));
    CHECK(p(1, 2) == doctest::Approx(0.3));
    // Bottom row folds the down mass into stay; top row folds the up mass.
    CHECK(p(0, 0) == doctest::Approx(0.7));
    CHECK(p(0, 1) == doctest::Approx(0.3));
    CHECK(p(2, 1) == doctest::Approx(0.2));
    CHECK(p(2, 2) == doctest::Approx(0.8));
    for (int i = 0; i < 3; ++i) CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((p.array() >= 0.0).all());

    CHECK_THROWS(build_transition_matrix({t}));
    CHECK_THROWS(build_transition_matrix({t, {0.5, 0.6, 0.2}, t}));  // non-stochastic
}

TEST_CASE("multi-step distribution equals explicit path enumeration") {
    const TransitionTriple t{0.25, 0.55, 0.2};
    const Eigen::MatrixXd p = build_transition_matrix({t, t, t});
    Eigen::VectorXd pi0(3);
    pi0 << 1.0, 0.0, 0.0;
    const Eigen::VectorXd pi2 = n_step_distribution(p, pi0, 2);
    // Two-step paths from state 0 enumerated by hand.
    const double want0 = p(0, 0) * p(0, 0) + p(0, 1) * p(1, 0);
    const double want1 = p(0, 0) * p(0, 1) + p(0, 1) * p(1, 1);
    const double want2 = p(0, 1) * p(1, 2);
    CHECK(pi2(0) == doctest::Approx(want0).epsilon(1e-14));
    CHECK(pi2(1) == doctest::Approx(want1).epsilon(1e-14));
    CHECK(pi2(2) == doctest::Approx(want2).epsilon(1e-14));
    CHECK((n_step_distribution(p, pi0, 0) - pi0).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS(n_step_distribution(p, pi0, -1));
    Eigen::VectorXd bad(2);
    bad << 0.5, 0.5;
    CHECK_THROWS(n_step_distribution(p, bad, 1));
}

TEST_CASE("probability mass is conserved over a long horizon") {
    const int m = 50;
    std::vector<TransitionTriple> triples(m, TransitionTriple{0.001, 0.9985, 0.0005});
    const Eigen::MatrixXd p = build_transition_matrix(triples);
    Eigen::VectorXd pi = Eigen::VectorXd::Constant(m, 1.0 / m);
    pi = n_step_distribution(p, pi, 100000);
    CHECK(std::abs(pi.sum() - 1.0) < 1e-12);
    CHECK((pi.array() >= 0.0).all());
    // Drift-down chain concentrates near the bottom state.
    CHECK(pi(0) > pi(m - 1));
}
