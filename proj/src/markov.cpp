#include "cfwet/markov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cfwet/special.hpp"

namespace cfwet {

double energy_consumption(const NetworkConfig& cfg) {
    const double tc = cfg.coherence_interval_s;
    return cfg.frac_pilot * tc * cfg.pilot_power_w + cfg.frac_ul * tc * cfg.ul_power_w;
}

double prob_nonpositive_differential(double consumption_j, const GammaFit& fit) {
    if (consumption_j <= 0.0) return 0.0;
    return harvested_energy_cdf(consumption_j, fit);
}

TransitionTriple transition_triple(double mean_differential_j, double consumption_j,
                                   const GammaFit& fit, int num_states, double capacity_j) {
    if (num_states < 2) throw std::invalid_argument("transition_triple: num_states must be >= 2");
    if (capacity_j <= 0.0) throw std::invalid_argument("transition_triple: capacity must be positive");
    const double w = num_states * std::abs(mean_differential_j) / capacity_j;
    if (w >= 1.0)
        throw std::invalid_argument(
            "transition_triple: mean differential exceeds one state quantum");
    if (w == 0.0) return {0.0, 1.0, 0.0};
    const double p_minus = prob_nonpositive_differential(consumption_j, fit);
    // Upper tail evaluated directly so a tiny up-probability does not cancel
    // against 1 in double precision.
    const double p_plus = consumption_j <= 0.0
                              ? 1.0
                              : gammainc_upper_reg(fit.shape, consumption_j / fit.scale);
    return {w * p_minus, 1.0 - (w * p_minus + w * p_plus), w * p_plus};
}

Eigen::MatrixXd build_transition_matrix(const std::vector<TransitionTriple>& triples) {
    const int m = static_cast<int>(triples.size());
    if (m < 2) throw std::invalid_argument("build_transition_matrix: need at least two states");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const auto& t = triples[i];
        if (t.down < 0 || t.stay < 0 || t.up < 0 ||
            std::abs(t.down + t.stay + t.up - 1.0) > 1e-12)
            throw std::invalid_argument("build_transition_matrix: non-stochastic triple");
        double stay = t.stay;
        if (i == 0) stay += t.down; else p(i, i - 1) = t.down;
        if (i == m - 1) stay += t.up; else p(i, i + 1) = t.up;
        p(i, i) = stay;
    }
    return p;
}

Eigen::VectorXd n_step_distribution(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& pi0,
                                    long n) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != pi0.size())
        throw std::invalid_argument("n_step_distribution: dimension mismatch");
    if (n < 0) throw std::invalid_argument("n_step_distribution: negative step count");
    const int m = static_cast<int>(matrix.rows());
    // Stored rows sum to 1 only up to representation rounding; left as-is that
    // half-ulp deficit compounds into a systematic mass drift over long
    // horizons. Normalizing each row's contribution by its exactly-accumulated
    // sum (and accumulating the product in extended precision) keeps the mass
    // error down to random rounding noise.
    std::vector<long double> inv_rowsum(m);
    for (int i = 0; i < m; ++i) {
        long double s = 0.0L;
        for (int j = 0; j < m; ++j) s += matrix(i, j);
        if (s <= 0.0L) throw std::invalid_argument("n_step_distribution: zero row sum");
        inv_rowsum[i] = 1.0L / s;
    }
    std::vector<long double> pi(m), acc(m);
    for (int j = 0; j < m; ++j) pi[j] = pi0(j);
    for (long s = 0; s < n; ++s) {
        std::fill(acc.begin(), acc.end(), 0.0L);
        for (int i = 0; i < m; ++i) {
            if (pi[i] == 0.0L) continue;
            const long double w = pi[i] * inv_rowsum[i];
            for (int j = 0; j < m; ++j) {
                const double p = matrix(i, j);
                if (p != 0.0) acc[j] += w * p;
            }
        }
        pi.swap(acc);
    }
    Eigen::VectorXd out(m);
    for (int j = 0; j < m; ++j) out(j) = static_cast<double>(pi[j]);
    return out;
}

}  // namespace cfwet
