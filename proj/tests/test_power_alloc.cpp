#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cfwet/eh_stats.hpp"
#include "cfwet/power_alloc.hpp"
#include "frozen_scenario.hpp"

using namespace cfwet;

namespace {

NetworkConfig cfg_for(const LargeScaleState& ls, double budget = 10.0) {
    NetworkConfig cfg;
    cfg.num_ues = ls.K;
    cfg.num_aps = ls.L;
    cfg.antennas_per_ap = ls.N;
    cfg.total_power_w = budget;
    return cfg;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
    for (PaScheme s : {PaScheme::fpc, PaScheme::epa, PaScheme::ccpa, PaScheme::opt}) {
        CHECK(scheme_from_string(scheme_to_string(s)) == s);
    }
    CHECK(scheme_from_string("opt") == PaScheme::opt);
    CHECK_THROWS(scheme_from_string("bogus"));
}

TEST_CASE("minimum-energy UE selection with tie-break on the lowest index") {
    Eigen::VectorXd e(4);
    e << 3.0, 1.0, 2.0, 1.0;
    CHECK(select_min_ue(e) == 1);
    e << 5.0, 5.0, 5.0, 5.0;
    CHECK(select_min_ue(e) == 0);
    CHECK_THROWS(select_min_ue(Eigen::VectorXd()));
}

TEST_CASE("full power control spreads the budget uniformly") {
    const LargeScaleState ls = frozen::scenario();
    const NetworkConfig cfg = cfg_for(ls);
    const PaDecision d = fpc(ls, cfg);
    CHECK(d.scheme == PaScheme::fpc);
    CHECK(d.target_ue == -1);
    REQUIRE(d.allocation.rows() == ls.K);
    REQUIRE(d.allocation.cols() == ls.L);
    CHECK((d.allocation.array() == cfg.total_power_w / (ls.K * ls.L)).all());
    CHECK(d.allocation.sum() == doctest::Approx(cfg.total_power_w).epsilon(1e-15));
}

TEST_CASE("equal power allocation concentrates on the target row") {
    const LargeScaleState ls = frozen::scenario();
    const NetworkConfig cfg = cfg_for(ls);
    const PaDecision d = epa(1, ls, cfg);
    CHECK(d.scheme == PaScheme::epa);
    CHECK(d.target_ue == 1);
    for (int l = 0; l < ls.L; ++l)
        CHECK(d.allocation(1, l) == doctest::Approx(cfg.total_power_w / ls.L).epsilon(1e-15));
    CHECK(d.allocation.row(0).cwiseAbs().sum() == 0.0);
    CHECK(d.allocation.row(2).cwiseAbs().sum() == 0.0);
    CHECK_THROWS(epa(5, ls, cfg));
}

TEST_CASE("channel-conditioned allocation splits by estimate norms") {
    const LargeScaleState ls = frozen::scenario();
    NetworkConfig cfg = cfg_for(ls);

    SUBCASE("expected norms need no realization") {
        cfg.ccpa_expected_norms = true;
        const PaDecision d = ccpa(0, ls, cfg, nullptr);
        CHECK(d.scheme == PaScheme::ccpa);
        const double n0 = std::sqrt(ls.N * (ls.varsig(0, 0) + ls.gamma(0, 0)));
        const double n1 = std::sqrt(ls.N * (ls.varsig(0, 1) + ls.gamma(0, 1)));
        CHECK(d.allocation(0, 0) ==
              doctest::Approx(cfg.total_power_w * n0 / (n0 + n1)).epsilon(1e-12));
        CHECK(d.allocation(0, 1) ==
              doctest::Approx(cfg.total_power_w * n1 / (n0 + n1)).epsilon(1e-12));
        CHECK(d.allocation.row(1).cwiseAbs().sum() == 0.0);
        CHECK(d.allocation.sum() == doctest::Approx(cfg.total_power_w).epsilon(1e-12));
    }

    SUBCASE("instantaneous norms require a fresh realization") {
        CHECK_THROWS(ccpa(0, ls, cfg, nullptr));
        Rng rng(7);
        const ChannelRealization r = draw_realization(ls, rng);
        const PaDecision d = ccpa(0, ls, cfg, &r);
        const double n0 = r.ghat[0 * ls.L + 0].norm();
        const double n1 = r.ghat[0 * ls.L + 1].norm();
        CHECK(d.allocation(0, 0) ==
              doctest::Approx(cfg.total_power_w * n0 / (n0 + n1)).epsilon(1e-12));
        CHECK(d.allocation(0, 1) ==
              doctest::Approx(cfg.total_power_w * n1 / (n0 + n1)).epsilon(1e-12));
    }
}

TEST_CASE("allocations scale linearly with the power budget") {
    const LargeScaleState ls = frozen::scenario();
    NetworkConfig c1 = cfg_for(ls, 4.0), c2 = cfg_for(ls, 10.0);
    c1.ccpa_expected_norms = c2.ccpa_expected_norms = true;
    for (auto make : {+[](const LargeScaleState& l, const NetworkConfig& c) {
                          return fpc(l, c).allocation;
                      },
                      +[](const LargeScaleState& l, const NetworkConfig& c) {
                          return epa(2, l, c).allocation;
                      },
                      +[](const LargeScaleState& l, const NetworkConfig& c) {
                          return ccpa(2, l, c).allocation;
                      }}) {
        const Eigen::MatrixXd a = make(ls, c1), b = make(ls, c2);
        CHECK(((10.0 / 4.0) * a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("optimized allocation dominates the heuristics on the target objective") {
    const LargeScaleState ls = frozen::scenario();
    NetworkConfig cfg = cfg_for(ls);
    cfg.ccpa_expected_norms = true;
    for (int kbar = 0; kbar < ls.K; ++kbar) {
        const PaDecision o = optimized_pa(kbar, ls, cfg);
        CHECK(o.scheme == PaScheme::opt);
        CHECK(o.target_ue == kbar);
        CHECK(o.allocation.sum() <= cfg.total_power_w * (1.0 + 1e-9));
        CHECK(o.allocation.minCoeff() >= 0.0);
        REQUIRE(o.solver.has_value());
        const double vopt = mean_received_power(kbar, o.allocation, ls);
        const double vccpa = mean_received_power(kbar, ccpa(kbar, ls, cfg).allocation, ls);
        const double vepa = mean_received_power(kbar, epa(kbar, ls, cfg).allocation, ls);
        CHECK(vopt >= vccpa * (1.0 - 1e-9));
        CHECK(vccpa >= vepa * (1.0 - 1e-9));
    }
}

TEST_CASE("single-AP network degenerates to an all-in allocation") {
    LargeScaleState ls = frozen::scenario();
    // Keep only the first AP column.
    ls.L = 1;
    ls.beta = ls.beta.col(0).eval();
    ls.kfac = ls.kfac.col(0).eval();
    ls.aoa = ls.aoa.col(0).eval();
    ls.zeta = ls.zeta.col(0).eval();
    ls.varsig = ls.varsig.col(0).eval();
    std::vector<Eigen::VectorXcd> hb(ls.K);
    for (int k = 0; k < ls.K; ++k) hb[k] = ls.hbar[k * 2];
    ls.hbar = hb;
    NetworkConfig cfg;
    cfg.num_ues = ls.K;
    cfg.num_aps = 1;
    cfg.antennas_per_ap = ls.N;
    cfg.total_power_w = 6.0;
    cfg.ccpa_expected_norms = true;
    derive_estimation_stats(ls, cfg);
    const PaDecision o = optimized_pa(1, ls, cfg);
    REQUIRE(o.allocation.cols() == 1);
    CHECK(o.allocation(1, 0) == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(o.allocation.sum() == doctest::Approx(6.0).epsilon(1e-9));
}
