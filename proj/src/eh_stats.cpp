#include "cfwet/eh_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "cfwet/kernels.hpp"
#include "cfwet/special.hpp"

namespace cfwet {

std::complex<double> xi_term(int i, int k, int l, int lp, const LargeScaleState& ls) {
    if (i < 0 || i >= ls.K || k < 0 || k >= ls.K || l < 0 || l >= ls.L || lp < 0 || lp >= ls.L)
        throw std::out_of_range("xi_term: index out of range");
    const double N = ls.N;
    const bool shared = ls.shares_pilot(i, k);
    const double zc = std::sqrt(ls.varsig(k, l) * ls.varsig(i, l));
    if (l == lp) {
        const double w2 = std::norm(ls.omega[l](i, k));
        double base = N * (N * zc * zc * w2 + ls.varsig(k, l) * ls.gamma(i, l) +
                           ls.beta(k, l) * (ls.varsig(i, l) + ls.gamma(i, l)));
        if (shared) {
            const double a = ls.alpha(i, k, l);
            base += N * (N * ls.gamma(k, l) * ls.gamma(i, l) +
                         2.0 * N * a * zc * ls.omega[l](i, k).real() * ls.gamma(k, l));
        }
        return {base, 0.0};
    }
    const double zcp = std::sqrt(ls.varsig(k, lp) * ls.varsig(i, lp));
    const cd f1 = zc * ls.omega[l](i, k) + ls.alpha(i, k, l) * ls.gamma(k, l);
    const cd f2 = zcp * std::conj(ls.omega[lp](i, k)) + ls.alpha(i, k, lp) * ls.gamma(k, lp);
    return N * N * f1 * f2;
}

double mean_received_power(int k, const Eigen::MatrixXd& Omega, const LargeScaleState& ls) {
    if (Omega.rows() != ls.K || Omega.cols() != ls.L)
        throw std::invalid_argument("mean_received_power: allocation shape mismatch");
    if ((Omega.array() < 0.0).any())
        throw std::invalid_argument("mean_received_power: negative power coefficient");
    cd tot = 0.0;
    for (int i = 0; i < ls.K; ++i) {
        for (int l = 0; l < ls.L; ++l) {
            for (int lp = 0; lp < ls.L; ++lp) {
                tot += ls.kappa(i, l) * ls.kappa(i, lp) *
                       std::sqrt(Omega(i, l) * Omega(i, lp)) * xi_term(i, k, l, lp, ls);
            }
        }
    }
    return tot.real();
}

double var_received_power(int k, const Eigen::MatrixXd& Omega, const LargeScaleState& ls) {
    return ReceivedPowerAnalyzer(k, ls).variance(Omega);
}

namespace {

double termwise_coherent(int i, int k, int l, const LargeScaleState& ls) {
    const double N = ls.N;
    const double b = ls.beta(k, l), g = ls.gamma(k, l);
    const double sk = ls.varsig(k, l), si = ls.varsig(i, l);
    const double z2 = ls.varsig(k, l) * ls.varsig(i, l);
    const double w2 = std::norm(ls.omega[l](i, k));
    if (ls.shares_pilot(i, k)) {
        const double a = ls.alpha(i, k, l);
        const double a2 = a * a, a4 = a2 * a2;
        double t = 2 * N * N * z2 *
                   (N * a2 * sk * w2 * g + N * b * w2 * si + a2 * w2 * g * (b + N * g) +
                    a2 * b * g);
        t += N * N * (a4 * sk * sk * g * g + b * b * si * si);
        t += 2 * a2 * g * N * (N + 1) *
             (a2 * sk * g * ((N + 1) * g + b) + si * ((N - 1) * b * g + b * b + 2 * g * g));
        t += N * a4 * g * g *
             ((N + 1) * (N + 2) * g * ((N + 3) * g + 4 * (b - g)) +
              (b - g) * (b - g) * (2 * N + 1) - (b + N * g) * (b + N * g));
        return t;
    }
    const double gi = ls.gamma(i, l);
    const double a2 = N * N * z2 * w2;
    const double s = N * sk * gi, t = N * b * si, u = N * b * gi;
    return 2 * a2 * s + s * s + 2 * a2 * t + 2 * a2 * u + 8 * a2 * u / N + 2 * s * t +
           s * u * (4 * (N + 1) / N - 2) + t * t + u * u * (N + 2) / N + t * u * (2 + 4 / N);
}

double termwise_noncoherent(int i, int k, int l, int lp, const LargeScaleState& ls) {
    const double N = ls.N;
    if (ls.shares_pilot(i, k)) {
        const double al = ls.alpha(i, k, l), alp = ls.alpha(i, k, lp);
        const double al2 = al * al, alp2 = alp * alp;
        const double b = ls.beta(k, l), bp = ls.beta(k, lp);
        const double g = ls.gamma(k, l), gp = ls.gamma(k, lp);
        const double sk = ls.varsig(k, l), skp = ls.varsig(k, lp);
        const double si = ls.varsig(i, l), sip = ls.varsig(i, lp);
        const double z2 = ls.varsig(k, l) * ls.varsig(i, l);
        const double zp2 = ls.varsig(k, lp) * ls.varsig(i, lp);
        const double w2 = std::norm(ls.omega[l](i, k));
        const double rho2 = std::norm(ls.omega[lp](i, k));
        return N * N * N * al2 * sk * zp2 * rho2 * g + N * N * N * rho2 * b * si * zp2 +
               N * N * al2 * zp2 * rho2 * g * (b + N * g) +
               N * N * N * alp2 * w2 * z2 * skp * gp +
               N * N * al2 * alp2 * sk * skp * g * gp + N * N * alp2 * b * si * skp * gp +
               N * N * al2 * bp * sk * sip * g +
               N * N * al2 * alp2 * skp * gp * g * (b + N * g) +
               N * N * N * w2 * bp * sip * z2 + N * N * al2 * bp * sip * g * (b + N * g) +
               N * N * b * bp * si * sip + N * N * w2 * alp2 * z2 * gp * (bp + N * gp) +
               N * N * al2 * alp2 * sk * g * gp * (bp + N * gp) +
               N * N * alp2 * b * si * gp * (bp + N * gp) +
               N * N * al2 * alp2 * g * gp * (b * bp + N * (g * bp + b * gp));
    }
    auto second_abs = [&](int ll) {
        const double z2 = ls.varsig(k, ll) * ls.varsig(i, ll);
        return N * N * z2 * std::norm(ls.omega[ll](i, k)) +
               N * ls.varsig(k, ll) * ls.gamma(i, ll) +
               N * ls.beta(k, ll) * ls.varsig(i, ll) + N * ls.beta(k, ll) * ls.gamma(i, ll);
    };
    const double a2l = N * N * ls.varsig(k, l) * ls.varsig(i, l) * std::norm(ls.omega[l](i, k));
    const double a2lp =
        N * N * ls.varsig(k, lp) * ls.varsig(i, lp) * std::norm(ls.omega[lp](i, k));
    return second_abs(l) * second_abs(lp) - a2l * a2lp;
}

}  // namespace

double var_received_power_termwise(int k, const Eigen::MatrixXd& Omega,
                                   const LargeScaleState& ls) {
    if (Omega.rows() != ls.K || Omega.cols() != ls.L)
        throw std::invalid_argument("var_received_power_termwise: allocation shape mismatch");
    if ((Omega.array() < 0.0).any())
        throw std::invalid_argument("var_received_power_termwise: negative power coefficient");
    double tot = 0.0;
    for (int i = 0; i < ls.K; ++i) {
        for (int l = 0; l < ls.L; ++l) {
            for (int lp = 0; lp < ls.L; ++lp) {
                const double w =
                    std::pow(ls.kappa(i, l) * ls.kappa(i, lp), 2) * Omega(i, l) * Omega(i, lp);
                tot += w * (l == lp ? termwise_coherent(i, k, l, ls)
                                    : termwise_noncoherent(i, k, l, lp, ls));
            }
        }
    }
    return tot;
}

double logistic(double input_w, const EhCircuit& circuit) {
    return 1.0 / (1.0 + std::exp(-circuit.a * (input_w - circuit.b)));
}

double mean_harvested_energy(double mean_input_w, const EhCircuit& circuit,
                             double harvest_duration_s) {
    return harvest_duration_s * circuit.psi() * (logistic(mean_input_w, circuit) - circuit.phi());
}

double var_harvested_energy(double mean_input_w, double var_input_w, const EhCircuit& circuit,
                            double harvest_duration_s) {
    // Second-order delta method: in V{Lambda(I)} = E{Lambda^2} - (E{Lambda})^2
    // the Lambda''*Lambda terms of the two expansions cancel, leaving
    // Lambda'^2 V{I}. Keeping the uncancelled Lambda''*Lambda term would
    // inflate the variance by the constant 1 + (1-2*phi)/(1-phi) (about 1.88)
    // everywhere below the harvester knee; Monte-Carlo sampling confirms the
    // cancelled form.
    const double lam = logistic(mean_input_w, circuit);
    const double d1 = circuit.a * lam * (1.0 - lam);
    const double scale = harvest_duration_s * circuit.psi();
    return scale * scale * var_input_w * d1 * d1;
}

GammaFit gamma_fit(double mean, double variance) {
    if (!(mean > 0.0) || !(variance > 0.0))
        throw std::invalid_argument("gamma_fit: moments must be positive");
    return {mean * mean / variance, variance / mean};
}

double harvested_energy_cdf(double energy_j, const GammaFit& fit) {
    if (energy_j <= 0.0) return 0.0;
    return gammainc_lower_reg(fit.shape, energy_j / fit.scale);
}

McStats mc_oracle(int k, const Eigen::MatrixXd& Omega, const LargeScaleState& ls,
                  const EhCircuit& circuit, double harvest_duration_s, std::size_t n_samples,
                  Rng& rng, bool keep_samples) {
    if (n_samples < 1) throw std::invalid_argument("mc_oracle: need at least one sample");
    const int K = ls.K, L = ls.L;
    const Eigen::MatrixXd w = ls.kappa.array() * Omega.array().sqrt();

    McStats st;
    if (keep_samples) st.energy_samples.reserve(n_samples);
    // Welford accumulators for I and E.
    double mi = 0.0, m2i = 0.0, me = 0.0, m2e = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        const ChannelRealization r = draw_realization(ls, rng);
        double input = 0.0;
        for (int i = 0; i < K; ++i) {
            cd acc = 0.0;
            for (int l = 0; l < L; ++l) {
                const auto& gk = r.g[k * L + l];
                const auto& gi = r.ghat[i * L + l];
                // g_kl^T conj(ghat_il)
                acc += w(i, l) * kernels::cdot_conj(gk.data(), gi.data(), gk.size());
            }
            input += std::norm(acc);
        }
        const double energy =
            harvest_duration_s * circuit.psi() * (logistic(input, circuit) - circuit.phi());
        if (keep_samples) st.energy_samples.push_back(energy);
        const double n1 = static_cast<double>(s + 1);
        double d = input - mi;
        mi += d / n1;
        m2i += d * (input - mi);
        d = energy - me;
        me += d / n1;
        m2e += d * (energy - me);
    }
    st.mean_input = mi;
    st.var_input = n_samples > 1 ? m2i / n_samples : 0.0;
    st.mean_energy = me;
    st.var_energy = n_samples > 1 ? m2e / n_samples : 0.0;
    return st;
}

}  // namespace cfwet
