#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cfwet/channel.hpp"
#include "cfwet/config.hpp"
#include "cfwet/markov.hpp"
#include "cfwet/power_alloc.hpp"

namespace cfwet {

enum class SimMode { exact, gamma_sampled };

SimMode sim_mode_from_string(const std::string& name);

// Optional decimated trajectory log.
struct TrajectoryRow {
    long interval;
    int ue;
    double energy_j;
    int state;
    double harvested_j;
    double consumed_j;
    PaScheme scheme;
    int target_ue;
};

struct TransitionCounts {
    long down = 0, stay = 0, up = 0;
    TransitionTriple normalized() const;
};

struct SimReport {
    long intervals = 0;
    Eigen::VectorXd final_energy;              // per UE, J
    std::vector<int> final_state;              // per UE, 1..M
    std::vector<TransitionCounts> transitions; // per UE
    double mean_sum_eh_per_pa = 0.0;           // J per PA period, network total
    double mean_min_eh_per_pa = 0.0;           // J per PA period, harvested by the
                                               // minimum-energy UE of that period
    double final_min_energy = 0.0;             // J
    long solver_fallbacks = 0;
    long solver_unconverged = 0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

struct SimOptions {
    SimMode mode = SimMode::gamma_sampled;
    std::vector<TrajectoryRow>* log = nullptr;
    long log_decimation = 1;
    // Fixed initial energies (per UE); empty = uniform draws over [0, E_f].
    Eigen::VectorXd initial_energy;
};

// Evolves per-UE battery energy over coherence intervals with periodic
// power-allocation decisions targeting the minimum-energy UE.
SimReport run_trajectory(const NetworkConfig& cfg, PaScheme scheme, long n_intervals,
                         const SimOptions& opts, Rng& rng);

// Normalized per-UE transition probabilities from logged counts.
std::vector<TransitionTriple> empirical_transitions(const SimReport& report);

struct SchemeComparisonRow {
    PaScheme scheme;
    double mean_sum_eh_per_pa = 0.0;
    double mean_min_eh_per_pa = 0.0;
    double final_min_energy = 0.0;
    long solver_fallbacks = 0;
};

// Paired-seed comparison: every scheme sees the identical random stream.
std::vector<SchemeComparisonRow> scheme_comparison(const NetworkConfig& cfg,
                                                   const std::vector<PaScheme>& schemes,
                                                   long n_intervals, SimMode mode,
                                                   std::uint64_t seed);

}  // namespace cfwet
