#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cfwet/channel.hpp"
#include "cfwet/config.hpp"
#include "cfwet/socp.hpp"

namespace cfwet {

enum class PaScheme { fpc, epa, ccpa, opt };

PaScheme scheme_from_string(const std::string& name);
std::string scheme_to_string(PaScheme s);

struct PaSolverReport {
    int iterations = 0;          // summed over the sub-problems actually solved
    double max_r_dual = 0.0, max_r_pri = 0.0, max_eta = 0.0;
    int subproblems = 0;
    int unconverged = 0;         // sub-problems that returned a best iterate
    bool fell_back_to_ccpa = false;
};

struct PaDecision {
    PaScheme scheme = PaScheme::fpc;
    int target_ue = -1;          // unused (-1) for FPC
    Eigen::MatrixXd allocation;  // K x L
    std::optional<PaSolverReport> solver;
};

// Index of the minimum battery energy; ties broken by lowest index.
int select_min_ue(const Eigen::VectorXd& energies);

// Uniform coefficient on every (UE, AP) pair, total exactly the budget.
PaDecision fpc(const LargeScaleState& ls, const NetworkConfig& cfg);

// Budget split equally over APs on the target UE's row.
PaDecision epa(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg);

// Budget split over APs proportionally to the target UE's estimate norms:
// instantaneous norms from a fresh realization, or expected norms
// sqrt(N (varsig + gamma)) when cfg.ccpa_expected_norms is set (the
// realization pointer may then be null).
PaDecision ccpa(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg,
                const ChannelRealization* fresh = nullptr);

struct OptOptions {
    SolveOptions solver;
    // Cross coefficients below this fraction of the strongest one are treated
    // as absent when splitting a UE row into independently-solved AP groups.
    double coupling_threshold = 1e-3;
};

// Interior-point-optimized allocation. The separable objective is maximized
// per UE row and, within a row, per connected group of coupled APs (the
// budget provably concentrates on the best group); candidates are compared
// on the unclamped mean-received-power objective. Falls back to CCPA
// (expected norms) if no candidate beats it.
PaDecision optimized_pa(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg,
                        const OptOptions& opts = {});

}  // namespace cfwet
