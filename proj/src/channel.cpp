#include "cfwet/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace cfwet {

Geometry place_network(const NetworkConfig& cfg, Rng& rng) {
    cfg.validate();
    const int L = cfg.num_aps, K = cfg.num_ues;
    const double side = cfg.area_side;

    Geometry geo;
    geo.ap_xy.resize(L, 2);
    const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(L))));
    const double cell = side / grid;
    // Row-major fill of grid cell centres; exact uniform grid when L is a
    // perfect square, nearest-grid fill otherwise.
    for (int a = 0; a < L; ++a) {
        const int gx = a % grid, gy = a / grid;
        geo.ap_xy(a, 0) = (gx + 0.5) * cell;
        geo.ap_xy(a, 1) = (gy + 0.5) * cell;
    }
    geo.ue_xy.resize(K, 2);
    std::uniform_real_distribution<double> uni(0.0, side);
    for (int k = 0; k < K; ++k) {
        geo.ue_xy(k, 0) = uni(rng);
        geo.ue_xy(k, 1) = uni(rng);
    }
    const double dh = cfg.ap_height - cfg.ue_height;
    geo.dist.resize(K, L);
    for (int k = 0; k < K; ++k) {
        for (int a = 0; a < L; ++a) {
            const double dx = geo.ue_xy(k, 0) - geo.ap_xy(a, 0);
            const double dy = geo.ue_xy(k, 1) - geo.ap_xy(a, 1);
            geo.dist(k, a) = std::sqrt(dx * dx + dy * dy + dh * dh);
        }
    }
    return geo;
}

double path_loss_db(double d, const NetworkConfig& cfg) {
    if (!(d > 0.0)) throw std::invalid_argument("path_loss_db: distance must be positive");
    const double f = cfg.carrier_freq_mhz;
    const double lp = 46.3 + 33.9 * std::log10(f) - 13.82 * std::log10(cfg.ap_height) -
                      (1.1 * std::log10(f) - 0.7) * cfg.ue_height +
                      (1.56 * std::log10(f) - 0.8);
    const double d0 = 10.0, d1 = 50.0;
    const double dk = d * 1e-3, d1k = d1 * 1e-3, d0k = d0 * 1e-3;
    if (d > d1) return lp + 35.0 * std::log10(dk);
    if (d > d0) return lp + 15.0 * std::log10(d1k) + 20.0 * std::log10(dk);
    return lp + 15.0 * std::log10(d1k) + 20.0 * std::log10(d0k);
}

double large_scale_gain(double pl_db, double shadowing_db) {
    return std::pow(10.0, -(pl_db + shadowing_db) / 10.0);
}

LargeScaleState make_large_scale(const Geometry& geo, const NetworkConfig& cfg, Rng& rng) {
    const int K = cfg.num_ues, L = cfg.num_aps, N = cfg.antennas_per_ap;
    LargeScaleState ls;
    ls.K = K;
    ls.L = L;
    ls.N = N;
    ls.zeta.resize(K, L);
    ls.kfac.resize(K, L);
    ls.beta.resize(K, L);
    ls.varsig.resize(K, L);
    ls.aoa.resize(K, L);
    ls.hbar.resize(static_cast<std::size_t>(K) * L);
    ls.noise_power = cfg.noise_power_w();
    ls.pilot_energy = cfg.pilot_length_symbols() * cfg.pilot_power_w;

    std::normal_distribution<double> stdnorm(0.0, 1.0);
    std::uniform_real_distribution<double> uaoa(-M_PI / 2.0, M_PI / 2.0);
    const double d1 = 50.0;
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < L; ++l) {
            const double d = geo.dist(k, l);
            double psi = 0.0;
            if (cfg.shadowing_enabled && d > d1) psi = cfg.shadowing_std_db * stdnorm(rng);
            ls.zeta(k, l) = large_scale_gain(path_loss_db(d, cfg), psi);
            ls.kfac(k, l) = cfg.ricean_factor_override >= 0.0
                                ? cfg.ricean_factor_override
                                : std::pow(10.0, 1.3 - 0.003 * d);
            ls.beta(k, l) = ls.zeta(k, l) / (ls.kfac(k, l) + 1.0);
            ls.varsig(k, l) = ls.beta(k, l) * ls.kfac(k, l);
            const double phi = uaoa(rng);
            ls.aoa(k, l) = phi;
            Eigen::VectorXcd h(N);
            for (int n = 0; n < N; ++n) {
                const double arg = M_PI * n * std::sin(phi);
                h(n) = cd(std::cos(arg), std::sin(arg));
            }
            ls.hbar[k * L + l] = std::move(h);
        }
    }

    // Pilot assignment: orthogonal when K fits in the pilot length, else
    // round-robin reuse.
    const int tp = cfg.pilot_length_symbols();
    ls.pilot.resize(K);
    for (int k = 0; k < K; ++k) ls.pilot[k] = (K <= tp) ? k : k % tp;
    ls.pilot_set.assign(K, {});
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < K; ++i) {
            if (ls.pilot[i] == ls.pilot[k]) ls.pilot_set[k].push_back(i);
        }
    }

    derive_estimation_stats(ls, cfg);
    return ls;
}

void derive_estimation_stats(LargeScaleState& ls, const NetworkConfig& cfg) {
    (void)cfg;
    const int K = ls.K, L = ls.L, N = ls.N;
    if (ls.pilot_set.empty()) throw std::invalid_argument("derive_estimation_stats: pilot sets unset");
    const double tpp = ls.pilot_energy;
    ls.c_gain.resize(K, L);
    ls.gamma.resize(K, L);
    ls.kappa.resize(K, L);
    for (int k = 0; k < K; ++k) {
        if (ls.pilot_set[k].empty())
            throw std::invalid_argument("derive_estimation_stats: empty pilot set");
        for (int l = 0; l < L; ++l) {
            double den = ls.noise_power;
            for (int i : ls.pilot_set[k]) den += tpp * ls.beta(i, l);
            ls.c_gain(k, l) = std::sqrt(tpp) * ls.beta(k, l) / den;
            ls.gamma(k, l) = std::sqrt(tpp) * ls.beta(k, l) * ls.c_gain(k, l);
            ls.kappa(k, l) = 1.0 / std::sqrt(N * (ls.varsig(k, l) + ls.gamma(k, l)));
        }
    }
    // omega[l](i,k) = hbar_kl^T conj(hbar_il) / N; Eigen's a.dot(b) is a^H b,
    // so this equals hbar_il.dot(hbar_kl) / N.
    ls.omega.assign(L, Eigen::MatrixXcd(K, K));
    for (int l = 0; l < L; ++l) {
        for (int i = 0; i < K; ++i) {
            for (int k = 0; k < K; ++k) {
                ls.omega[l](i, k) = ls.steer(i, l).dot(ls.steer(k, l)) / static_cast<double>(N);
            }
        }
    }
}

ChannelRealization draw_realization(const LargeScaleState& ls, Rng& rng) {
    const int K = ls.K, L = ls.L, N = ls.N;
    ChannelRealization r;
    r.K = K;
    r.L = L;
    r.N = N;
    r.g.resize(static_cast<std::size_t>(K) * L);
    r.ghat.resize(r.g.size());
    r.eps.resize(r.g.size());

    std::normal_distribution<double> stdnorm(0.0, 1.0);
    auto cn_vector = [&](double var) {
        Eigen::VectorXcd v(N);
        const double s = std::sqrt(var / 2.0);
        for (int n = 0; n < N; ++n) v(n) = cd(s * stdnorm(rng), s * stdnorm(rng));
        return v;
    };

    // NLoS parts, unit variance per entry.
    std::vector<Eigen::VectorXcd> gt(static_cast<std::size_t>(K) * L);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l) gt[k * L + l] = cn_vector(1.0);

    // One pilot-noise vector per (pilot id, AP): sharing UEs see identical noise.
    int npil = 0;
    for (int k = 0; k < K; ++k) npil = std::max(npil, ls.pilot[k] + 1);
    std::vector<Eigen::VectorXcd> nz(static_cast<std::size_t>(npil) * L);
    for (int p = 0; p < npil; ++p)
        for (int l = 0; l < L; ++l) nz[p * L + l] = cn_vector(ls.noise_power);

    const double sq_tpp = std::sqrt(ls.pilot_energy);
    for (int k = 0; k < K; ++k) {
        for (int l = 0; l < L; ++l) {
            const Eigen::VectorXcd gbar = std::sqrt(ls.varsig(k, l)) * ls.steer(k, l);
            r.g[k * L + l] = gbar + std::sqrt(ls.beta(k, l)) * gt[k * L + l];
            Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(N);
            for (int i : ls.pilot_set[k]) acc += std::sqrt(ls.beta(i, l)) * gt[i * L + l];
            r.ghat[k * L + l] =
                gbar + ls.c_gain(k, l) * (sq_tpp * acc + nz[ls.pilot[k] * L + l]);
            r.eps[k * L + l] = r.g[k * L + l] - r.ghat[k * L + l];
        }
    }
    return r;
}

}  // namespace cfwet
