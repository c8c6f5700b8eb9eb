#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cfwet/channel.hpp"
#include "cfwet/config.hpp"

namespace cfwet {

// Gamma surrogate of the harvested-energy distribution.
struct GammaFit {
    double shape = 0.0;  // dimensionless
    double scale = 0.0;  // joules
};

// Closed-form coefficient of the mean received power:
// Xi_{ik,ll'} = E{ g_kl^T ghat_il^* ghat_il'^T g_kl'^* } up to the kappa and
// power weights. Coherent branch (l == l') is real; the non-coherent branch
// is complex and the full double sum over (l,l') is real by symmetry.
std::complex<double> xi_term(int i, int k, int l, int lp, const LargeScaleState& ls);

// E{I_k}: sum over (i,l,l') of kappa_il kappa_il' sqrt(Omega_il Omega_il') Xi.
double mean_received_power(int k, const Eigen::MatrixXd& Omega, const LargeScaleState& ls);

// Exact V{I_k}, computed by conditioning on UE k's channels: given g_k the
// beamformed sum is complex Gaussian with analytic mean/covariance, and the
// outer expectations over g_k are exact polynomial moments (low-rank
// projection per term plus a chi-square remainder).
double var_received_power(int k, const Eigen::MatrixXd& Omega, const LargeScaleState& ls);

// Per-term closed-form variance that treats the (i,l,l') contributions as
// uncorrelated. Kept for comparison; it understates the true variance on
// realistic scenarios because the cross-term covariances are significant.
double var_received_power_termwise(int k, const Eigen::MatrixXd& Omega,
                                   const LargeScaleState& ls);

// Logistic harvester response 1/(1 + e^{-a(I-b)}).
double logistic(double input_w, const EhCircuit& circuit);

// E{E_k} = tau_h psi (Lambda[E{I_k}] - phi): first-order (Jensen) evaluation
// of the non-linear harvester at the mean input.
double mean_harvested_energy(double mean_input_w, const EhCircuit& circuit,
                             double harvest_duration_s);

// V{E_k} = (tau_h psi)^2 Lambda'^2 V{I_k} at E{I_k}: second-order delta
// method (the Lambda''*Lambda terms of E{Lambda^2} and (E{Lambda})^2 cancel).
double var_harvested_energy(double mean_input_w, double var_input_w,
                            const EhCircuit& circuit, double harvest_duration_s);

// Moment-matched Gamma parameters: shape = mean^2/var, scale = var/mean.
GammaFit gamma_fit(double mean, double variance);

// Regularized lower incomplete gamma of the fit at energy E.
double harvested_energy_cdf(double energy_j, const GammaFit& fit);

// Monte-Carlo oracle over small-scale draws.
struct McStats {
    double mean_input = 0.0, var_input = 0.0;    // I moments, W / W^2
    double mean_energy = 0.0, var_energy = 0.0;  // harvested-energy moments, J / J^2
    std::vector<double> energy_samples;          // filled when keep_samples
};
McStats mc_oracle(int k, const Eigen::MatrixXd& Omega, const LargeScaleState& ls,
                  const EhCircuit& circuit, double harvest_duration_s,
                  std::size_t n_samples, Rng& rng, bool keep_samples = false);

// Reusable exact-moment analyzer for one target UE: the expensive per-AP
// moment tables depend only on the large-scale state, so repeated variance
// evaluations across allocations are cheap.
class ReceivedPowerAnalyzer {
  public:
    ReceivedPowerAnalyzer(int k, const LargeScaleState& ls);
    ~ReceivedPowerAnalyzer();
    ReceivedPowerAnalyzer(ReceivedPowerAnalyzer&&) noexcept;
    ReceivedPowerAnalyzer& operator=(ReceivedPowerAnalyzer&&) noexcept;

    // Exact E{I_k} and V{I_k} for a given allocation.
    double mean(const Eigen::MatrixXd& Omega) const;
    double variance(const Eigen::MatrixXd& Omega) const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cfwet
