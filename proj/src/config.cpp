#include "cfwet/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cfwet {

using nlohmann::json;

double EhCircuit::phi() const { return 1.0 / (1.0 + std::exp(a * b)); }
double EhCircuit::psi() const { return i_max / (1.0 - phi()); }

int NetworkConfig::pilot_length_symbols() const {
    return static_cast<int>(std::lround(frac_pilot * samples_per_coherence));
}

double NetworkConfig::noise_power_w() const {
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double NetworkConfig::harvest_duration_s() const {
    return frac_harvest * coherence_interval_s;
}

int NetworkConfig::pa_period_intervals() const {
    return std::max(1, static_cast<int>(std::lround(pa_period_s / coherence_interval_s)));
}

void NetworkConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (num_aps < 1) fail("num_aps must be >= 1");
    if (antennas_per_ap < 1) fail("antennas_per_ap must be >= 1");
    if (num_ues < 1) fail("num_ues must be >= 1");
    if (area_side <= 0) fail("area_side must be positive");
    if (ap_height <= ue_height) fail("ap_height must exceed ue_height");
    if (carrier_freq_mhz <= 0) fail("carrier_freq_mhz must be positive");
    if (bandwidth_hz <= 0) fail("bandwidth_hz must be positive");
    if (coherence_interval_s <= 0) fail("coherence_interval_s must be positive");
    for (auto [v, name] : {std::pair{frac_pilot, "frac_pilot"},
                           {frac_harvest, "frac_harvest"},
                           {frac_dl, "frac_dl"},
                           {frac_ul, "frac_ul"}}) {
        if (v <= 0 || v >= 1) fail(std::string(name) + " must lie in (0,1)");
    }
    if (frac_pilot + frac_harvest + frac_dl + frac_ul > 1.0 + 1e-12)
        fail("frame fractions must sum to at most 1");
    if (samples_per_coherence < 1) fail("samples_per_coherence must be >= 1");
    if (pilot_length_symbols() < 1) fail("pilot length rounds to zero symbols");
    if (pilot_power_w <= 0) fail("pilot_power_w must be positive");
    if (ul_power_w < 0) fail("ul_power_w must be non-negative");
    if (total_power_w <= 0) fail("total_power_w must be positive");
    if (battery_capacity_j <= 0) fail("battery_capacity_j must be positive");
    if (num_states < 2) fail("num_states must be >= 2");
    if (pa_period_s <= 0) fail("pa_period_s must be positive");
    if (eh_circuit.a <= 0) fail("eh_circuit.a must be positive");
    if (eh_circuit.b <= 0) fail("eh_circuit.b must be positive");
    if (eh_circuit.i_max <= 0) fail("eh_circuit.i_max must be positive");
}

namespace {

struct Field {
    const char* key;
    void (*get)(NetworkConfig&, const json&);
    json (*put)(const NetworkConfig&);
};

template <typename T, T NetworkConfig::* M>
Field field(const char* key) {
    return {key,
            [](NetworkConfig& c, const json& v) { c.*M = v.get<T>(); },
            [](const NetworkConfig& c) { return json(c.*M); }};
}

template <typename T, T EhCircuit::* M>
Field eh_field(const char* key) {
    return {key,
            [](NetworkConfig& c, const json& v) { c.eh_circuit.*M = v.get<T>(); },
            [](const NetworkConfig& c) { return json(c.eh_circuit.*M); }};
}

const Field kFields[] = {
    field<int, &NetworkConfig::num_aps>("num_aps"),
    field<int, &NetworkConfig::antennas_per_ap>("antennas_per_ap"),
    field<int, &NetworkConfig::num_ues>("num_ues"),
    field<double, &NetworkConfig::area_side>("area_side"),
    field<double, &NetworkConfig::ap_height>("ap_height"),
    field<double, &NetworkConfig::ue_height>("ue_height"),
    field<double, &NetworkConfig::carrier_freq_mhz>("carrier_freq_mhz"),
    field<double, &NetworkConfig::bandwidth_hz>("bandwidth_hz"),
    field<double, &NetworkConfig::noise_figure_db>("noise_figure_db"),
    field<double, &NetworkConfig::coherence_interval_s>("coherence_interval_s"),
    field<double, &NetworkConfig::frac_pilot>("frac_pilot"),
    field<double, &NetworkConfig::frac_harvest>("frac_harvest"),
    field<double, &NetworkConfig::frac_dl>("frac_dl"),
    field<double, &NetworkConfig::frac_ul>("frac_ul"),
    field<int, &NetworkConfig::samples_per_coherence>("samples_per_coherence"),
    field<double, &NetworkConfig::pilot_power_w>("pilot_power_w"),
    field<double, &NetworkConfig::ul_power_w>("ul_power_w"),
    field<double, &NetworkConfig::total_power_w>("total_power_w"),
    field<double, &NetworkConfig::shadowing_std_db>("shadowing_std_db"),
    field<bool, &NetworkConfig::shadowing_enabled>("shadowing_enabled"),
    field<double, &NetworkConfig::battery_capacity_j>("battery_capacity_j"),
    field<int, &NetworkConfig::num_states>("num_states"),
    field<double, &NetworkConfig::pa_period_s>("pa_period_s"),
    field<double, &NetworkConfig::ricean_factor_override>("ricean_factor_override"),
    field<bool, &NetworkConfig::ccpa_expected_norms>("ccpa_expected_norms"),
    field<bool, &NetworkConfig::refresh_large_scale_per_pa>("refresh_large_scale_per_pa"),
    eh_field<double, &EhCircuit::a>("eh_a"),
    eh_field<double, &EhCircuit::b>("eh_b"),
    eh_field<double, &EhCircuit::i_max>("eh_i_max"),
    field<std::uint64_t, &NetworkConfig::rng_seed>("rng_seed"),
};

}  // namespace

NetworkConfig config_from_json_text(const std::string& text) {
    json doc = json::parse(text);
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");
    NetworkConfig cfg;
    std::set<std::string> known;
    for (const auto& f : kFields) known.insert(f.key);
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
        for (const auto& f : kFields) {
            if (key == f.key) {
                try {
                    f.get(cfg, value);
                } catch (const json::exception&) {
                    throw std::invalid_argument("config: bad value for '" + key + "'");
                }
            }
        }
    }
    cfg.validate();
    return cfg;
}

NetworkConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const NetworkConfig& cfg) {
    json doc = json::object();
    for (const auto& f : kFields) doc[f.key] = f.put(cfg);
    return doc.dump(2);
}

NetworkConfig preset_config(const std::string& name) {
    NetworkConfig cfg;
    if (name == "paper") return cfg;
    if (name == "desk") {
        cfg.num_aps = 4;
        cfg.antennas_per_ap = 8;  // L*N = 32
        cfg.num_ues = 5;
        cfg.num_states = 200;
        return cfg;
    }
    throw std::invalid_argument("unknown preset '" + name + "' (expected paper|desk)");
}

}  // namespace cfwet
