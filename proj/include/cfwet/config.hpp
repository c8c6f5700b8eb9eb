#pragma once

#include <cstdint>
#include <string>

namespace cfwet {

// Logistic energy-harvesting circuit constants.
struct EhCircuit {
    double a = 150.0;       // 1/W, logistic steepness
    double b = 0.014;       // W, turn-on threshold
    double i_max = 0.024;   // W, saturated harvester output

    double phi() const;     // zero-input response constant 1/(1+e^{ab})
    double psi() const;     // i_max / (1 - phi)
};

// All scenario constants. Defaults reproduce the reference system table.
struct NetworkConfig {
    int num_aps = 4;                    // L
    int antennas_per_ap = 72;           // N
    int num_ues = 20;                   // K
    double area_side = 100.0;           // m
    double ap_height = 15.0;            // m
    double ue_height = 1.65;            // m
    double carrier_freq_mhz = 1900.0;
    double bandwidth_hz = 20e6;
    double noise_figure_db = 9.0;
    double coherence_interval_s = 0.2;  // tau_c
    double frac_pilot = 0.1;            // tau_p
    double frac_harvest = 0.3;          // tau_h
    double frac_dl = 0.3;               // tau_d
    double frac_ul = 0.3;               // tau_u
    int samples_per_coherence = 200;    // pilot length = round(frac_pilot * this)
    double pilot_power_w = 3e-6;        // p_p
    double ul_power_w = 3e-6;           // p_u
    double total_power_w = 10.0;        // network DL budget
    double shadowing_std_db = 8.0;
    bool shadowing_enabled = true;
    double battery_capacity_j = 0.1;    // E_f
    int num_states = 2000;              // M
    double pa_period_s = 2.0;           // q
    double ricean_factor_override = -1.0;  // < 0: distance-decay model
    bool ccpa_expected_norms = false;   // CCPA weighting: expected vs drawn estimate norms
    bool refresh_large_scale_per_pa = false;
    EhCircuit eh_circuit;
    std::uint64_t rng_seed = 1;

    int pilot_length_symbols() const;   // round(frac_pilot * samples_per_coherence)
    double noise_power_w() const;       // thermal floor + noise figure over bandwidth
    double harvest_duration_s() const;  // frac_harvest * coherence_interval_s
    int pa_period_intervals() const;    // round(pa_period_s / coherence_interval_s)

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// JSON round trip. Parsing rejects unknown keys; missing keys take defaults.
NetworkConfig config_from_json_text(const std::string& text);
NetworkConfig config_from_json_file(const std::string& path);
std::string config_to_json_text(const NetworkConfig& cfg);

// Scale presets: "paper" = defaults above; "desk" = reduced CI-friendly scale.
NetworkConfig preset_config(const std::string& name);

}  // namespace cfwet
