#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cfwet/config.hpp"
#include "cfwet/eh_stats.hpp"

namespace cfwet {

// Per-interval transition probabilities of the discrete battery-state chain.
struct TransitionTriple {
    double down = 0.0;
    double stay = 1.0;
    double up = 0.0;
};

// Per-interval UL energy expenditure: pilot + UL data transmission.
double energy_consumption(const NetworkConfig& cfg);

// Pr(harvested <= consumed) under the fitted Gamma surrogate.
double prob_nonpositive_differential(double consumption_j, const GammaFit& fit);

// Transition probabilities from the mean energy differential and the fit.
// Requires |mean_diff| * M / capacity < 1 (the chain's step-size assumption).
TransitionTriple transition_triple(double mean_differential_j, double consumption_j,
                                   const GammaFit& fit, int num_states,
                                   double capacity_j);

// Tridiagonal row-stochastic matrix; boundary rows fold the out-of-range
// mass into the self transition.
Eigen::MatrixXd build_transition_matrix(const std::vector<TransitionTriple>& triples);

// pi_n = pi0 * P^n via iterated vector-matrix products.
Eigen::VectorXd n_step_distribution(const Eigen::MatrixXd& matrix,
                                    const Eigen::VectorXd& pi0, long n);

}  // namespace cfwet
