#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cfwet/config.hpp"

namespace cfwet {

using Rng = std::mt19937_64;
using cd = std::complex<double>;

// AP/UE planar coordinates and 3-D distances (height difference included).
struct Geometry {
    Eigen::MatrixXd ap_xy;  // L x 2
    Eigen::MatrixXd ue_xy;  // K x 2
    Eigen::MatrixXd dist;   // K x L, metres
};

// Slow-varying per-(UE,AP) channel statistics plus the derived MMSE
// estimation quantities.
struct LargeScaleState {
    int K = 0, L = 0, N = 0;
    Eigen::MatrixXd zeta;     // K x L, linear large-scale gain
    Eigen::MatrixXd kfac;     // K x L, Ricean factor
    Eigen::MatrixXd beta;     // K x L, NLoS gain zeta/(kfac+1)
    Eigen::MatrixXd varsig;   // K x L, LoS gain beta*kfac
    Eigen::MatrixXd aoa;      // K x L, radians
    std::vector<Eigen::VectorXcd> hbar;  // [k*L+l], unit-modulus steering, size N

    std::vector<int> pilot;                 // pilot id per UE
    std::vector<std::vector<int>> pilot_set;  // P_k (includes k)

    double noise_power = 0.0;   // sigma^2, W
    double pilot_energy = 0.0;  // pilot_len_symbols * pilot_power, "tau_p p_p"

    // Derived estimation statistics.
    Eigen::MatrixXd c_gain;   // K x L
    Eigen::MatrixXd gamma;    // K x L
    Eigen::MatrixXd kappa;    // K x L, precoder normalization
    // steering overlap omega[l](i,k) = hbar_kl^T conj(hbar_il) / N
    std::vector<Eigen::MatrixXcd> omega;  // per l: K x K

    bool shares_pilot(int i, int k) const { return pilot[i] == pilot[k]; }
    // Estimate proportionality ratio between pilot-sharing UEs' estimates.
    double alpha(int i, int k, int l) const {
        return shares_pilot(i, k) ? beta(i, l) / beta(k, l) : 0.0;
    }
    const Eigen::VectorXcd& steer(int k, int l) const { return hbar[k * L + l]; }
};

// One small-scale draw: true channels, MMSE estimates, estimation errors.
struct ChannelRealization {
    int K = 0, L = 0, N = 0;
    std::vector<Eigen::VectorXcd> g, ghat, eps;  // [k*L+l]
    const Eigen::VectorXcd& at(const std::vector<Eigen::VectorXcd>& v, int k, int l) const {
        return v[k * L + l];
    }
};

// APs on a uniform sqrt(L) x sqrt(L) grid (nearest-grid fill when L is not a
// perfect square), UEs uniform over the square.
Geometry place_network(const NetworkConfig& cfg, Rng& rng);

// Three-slope path loss in dB (positive = loss); d in metres, km-calibrated
// Hata-type constant.
double path_loss_db(double d, const NetworkConfig& cfg);

// zeta = 10^(-(PL + Psi)/10)
double large_scale_gain(double pl_db, double shadowing_db);

// Geometry -> LargeScaleState: path loss, shadowing (d > d1 only), Ricean
// factors, AoAs, pilot assignment, then estimation statistics.
LargeScaleState make_large_scale(const Geometry& geo, const NetworkConfig& cfg, Rng& rng);

// Fills c_gain, gamma, kappa, omega from beta/varsig/pilot sets.
void derive_estimation_stats(LargeScaleState& ls, const NetworkConfig& cfg);

// Draws small-scale NLoS parts and pilot noise; forms estimates and errors.
// Pilot noise is shared per (pilot id, AP), so pilot-sharing UEs' estimate
// fluctuations are exactly proportional.
ChannelRealization draw_realization(const LargeScaleState& ls, Rng& rng);

}  // namespace cfwet
