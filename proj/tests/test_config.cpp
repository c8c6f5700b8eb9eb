#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "cfwet/config.hpp"

using namespace cfwet;

TEST_CASE("defaults reproduce the reference parameter table") {
    const NetworkConfig c;
    CHECK(c.num_aps == 4);
    CHECK(c.antennas_per_ap == 72);
    CHECK(c.num_ues == 20);
    CHECK(c.area_side == 100.0);
    CHECK(c.total_power_w == 10.0);
    CHECK(c.pilot_power_w == 3e-6);
    CHECK(c.ul_power_w == 3e-6);
    CHECK(c.battery_capacity_j == 0.1);
    CHECK(c.num_states == 2000);
    CHECK(c.pilot_length_symbols() == 20);
    CHECK(c.pa_period_intervals() == 10);
    CHECK(c.harvest_duration_s() == doctest::Approx(0.06));
    // sigma^2 = 10^((-174 + 10 log10(20 MHz) + 9 - 30)/10)
    CHECK(c.noise_power_w() == doctest::Approx(6.3095734448019303e-13).epsilon(1e-12));
    CHECK(c.eh_circuit.a == 150.0);
    CHECK(c.eh_circuit.b == 0.014);
    CHECK(c.eh_circuit.i_max == 0.024);
}

TEST_CASE("empty JSON document yields full defaults") {
    const NetworkConfig c = config_from_json_text("{}");
    const NetworkConfig d;
    CHECK(config_to_json_text(c) == config_to_json_text(d));
}

TEST_CASE("unknown keys are rejected with the key name") {
    CHECK_THROWS_WITH_AS(config_from_json_text(R"({"num_asp": 4})"),
                         doctest::Contains("num_asp"), std::invalid_argument);
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    const std::string text =
        R"({"num_aps": 2, "antennas_per_ap": 4, "num_ues": 3, "total_power_w": 2.5,
            "shadowing_enabled": false, "rng_seed": 42, "eh_a": 100.0})";
    const NetworkConfig c1 = config_from_json_text(text);
    const std::string round = config_to_json_text(c1);
    const NetworkConfig c2 = config_from_json_text(round);
    CHECK(config_to_json_text(c2) == round);
    CHECK(c1.num_aps == 2);
    CHECK(c1.eh_circuit.a == 100.0);
    CHECK(c1.rng_seed == 42);
    CHECK_FALSE(c1.shadowing_enabled);
}

TEST_CASE("frame fractions summing above one fail validation") {
    CHECK_THROWS_AS(config_from_json_text(R"({"frac_pilot": 0.3, "frac_harvest": 0.3,
                                              "frac_dl": 0.3, "frac_ul": 0.3})"),
                    std::invalid_argument);
}

TEST_CASE("out-of-range values name the offending field") {
    CHECK_THROWS_WITH_AS(config_from_json_text(R"({"num_aps": 0})"),
                         doctest::Contains("num_aps"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(config_from_json_text(R"({"battery_capacity_j": -1.0})"),
                         doctest::Contains("battery_capacity_j"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(config_from_json_text(R"({"frac_pilot": 0.0})"),
                         doctest::Contains("frac_pilot"), std::invalid_argument);
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS(config_from_json_text("not json"));
    CHECK_THROWS_AS(config_from_json_text("[1,2,3]"), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json_text(R"({"num_aps": "four"})"), std::invalid_argument);
}

TEST_CASE("presets") {
    const NetworkConfig paper = preset_config("paper");
    CHECK(paper.antennas_per_ap == 72);
    const NetworkConfig desk = preset_config("desk");
    CHECK(desk.num_aps * desk.antennas_per_ap == 32);
    CHECK(desk.num_ues == 5);
    CHECK(desk.num_states == 200);
    CHECK_THROWS_AS(preset_config("huge"), std::invalid_argument);
}

TEST_CASE("harvester circuit constants") {
    const EhCircuit c;
    CHECK(c.phi() == doctest::Approx(1.0 / (1.0 + std::exp(150.0 * 0.014))).epsilon(1e-15));
    CHECK(c.psi() == doctest::Approx(c.i_max / (1.0 - c.phi())).epsilon(1e-15));
}
