#include "cfwet/sim.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "cfwet/eh_stats.hpp"
#include "cfwet/kernels.hpp"

namespace cfwet {

SimMode sim_mode_from_string(const std::string& name) {
    if (name == "exact") return SimMode::exact;
    if (name == "gamma") return SimMode::gamma_sampled;
    throw std::invalid_argument("unknown simulation mode '" + name + "' (expected exact|gamma)");
}

TransitionTriple TransitionCounts::normalized() const {
    const double total = static_cast<double>(down + stay + up);
    if (total <= 0.0) return {0.0, 1.0, 0.0};
    return {down / total, stay / total, up / total};
}

namespace {

int energy_state(double energy, double capacity, int m) {
    const int s = static_cast<int>(std::ceil(m * energy / capacity));
    return std::clamp(s, 1, m);
}

// Per-UE harvested-energy Gamma surrogates for a fixed allocation; UEs whose
// moment expressions degenerate harvest their mean deterministically.
struct FitSet {
    std::vector<std::optional<GammaFit>> fits;
    std::vector<double> means;
};

}  // namespace

SimReport run_trajectory(const NetworkConfig& cfg, PaScheme scheme, long n_intervals,
                         const SimOptions& opts, Rng& rng) {
    cfg.validate();
    if (n_intervals < 1) throw std::invalid_argument("run_trajectory: need at least one interval");
    const auto t_start = std::chrono::steady_clock::now();

    const int K = cfg.num_ues, L = cfg.num_aps, M = cfg.num_states;
    const double ef = cfg.battery_capacity_j;
    const double tau_h = cfg.harvest_duration_s();
    const double consumed = energy_consumption(cfg);
    const int pa_period = cfg.pa_period_intervals();

    Geometry geo = place_network(cfg, rng);
    LargeScaleState ls = make_large_scale(geo, cfg, rng);

    Eigen::VectorXd energy(K);
    if (opts.initial_energy.size() == K) {
        energy = opts.initial_energy;
    } else {
        std::uniform_real_distribution<double> uni(0.0, ef);
        for (int k = 0; k < K; ++k) energy(k) = uni(rng);
    }
    std::vector<int> state(K);
    for (int k = 0; k < K; ++k) state[k] = energy_state(energy(k), ef, M);

    SimReport rep;
    rep.transitions.assign(K, {});
    rep.seed = cfg.rng_seed;

    // Lazily-built exact-moment analyzers (gamma mode), one per UE.
    std::vector<std::optional<ReceivedPowerAnalyzer>> analyzers(K);
    std::map<int, FitSet> fit_cache;  // key: target UE (-1 for FPC)

    auto fits_for = [&](const PaDecision& d) -> const FitSet& {
        const int key = d.scheme == PaScheme::fpc ? -1 : d.target_ue;
        auto it = fit_cache.find(key);
        if (it != fit_cache.end()) return it->second;
        FitSet fs;
        fs.fits.resize(K);
        fs.means.resize(K);
        for (int k = 0; k < K; ++k) {
            if (!analyzers[k]) analyzers[k].emplace(k, ls);
            const double mi = mean_received_power(k, d.allocation, ls);
            const double vi = analyzers[k]->variance(d.allocation);
            const double me = mean_harvested_energy(mi, cfg.eh_circuit, tau_h);
            const double ve = var_harvested_energy(mi, vi, cfg.eh_circuit, tau_h);
            fs.means[k] = me;
            if (me > 0.0 && ve > 0.0) fs.fits[k] = gamma_fit(me, ve);
        }
        return fit_cache.emplace(key, std::move(fs)).first->second;
    };

    auto decide = [&](const ChannelRealization* fresh) {
        const int kbar = select_min_ue(energy);
        switch (scheme) {
            case PaScheme::fpc: return fpc(ls, cfg);
            case PaScheme::epa: return epa(kbar, ls, cfg);
            case PaScheme::ccpa: {
                if (opts.mode == SimMode::gamma_sampled) {
                    NetworkConfig c2 = cfg;
                    c2.ccpa_expected_norms = true;  // no instantaneous draws in this mode
                    return ccpa(kbar, ls, c2);
                }
                return ccpa(kbar, ls, cfg, fresh);
            }
            case PaScheme::opt: return optimized_pa(kbar, ls, cfg);
        }
        throw std::invalid_argument("run_trajectory: invalid scheme");
    };

    PaDecision decision;
    int period_target = 0;    // minimum-energy UE at the period start (all schemes)
    Eigen::MatrixXd weights;  // kappa .* sqrt(Omega), exact mode
    double period_sum = 0.0;
    Eigen::VectorXd period_per_ue = Eigen::VectorXd::Zero(K);
    double ledger_sum = 0.0, ledger_min = 0.0;
    long ledger_periods = 0;

    for (long n = 0; n < n_intervals; ++n) {
        ChannelRealization real;
        const bool have_real = opts.mode == SimMode::exact;
        if (have_real) real = draw_realization(ls, rng);

        if (n % pa_period == 0) {
            if (cfg.refresh_large_scale_per_pa && n > 0) {
                geo = place_network(cfg, rng);
                ls = make_large_scale(geo, cfg, rng);
                for (auto& a : analyzers) a.reset();
                fit_cache.clear();
            }
            period_target = select_min_ue(energy);
            decision = decide(have_real ? &real : nullptr);
            if (decision.solver) {
                rep.solver_fallbacks += decision.solver->fell_back_to_ccpa ? 1 : 0;
                rep.solver_unconverged += decision.solver->unconverged;
            }
            weights = ls.kappa.array() * decision.allocation.array().sqrt();
        }

        Eigen::VectorXd harvested(K);
        if (opts.mode == SimMode::exact) {
            for (int k = 0; k < K; ++k) {
                double input = 0.0;
                for (int i = 0; i < K; ++i) {
                    cd acc = 0.0;
                    for (int l = 0; l < L; ++l) {
                        const auto& gk = real.g[k * L + l];
                        const auto& gi = real.ghat[i * L + l];
                        acc += weights(i, l) * kernels::cdot_conj(gk.data(), gi.data(), gk.size());
                    }
                    input += std::norm(acc);
                }
                harvested(k) = mean_harvested_energy(input, cfg.eh_circuit, tau_h);
            }
        } else {
            const FitSet& fs = fits_for(decision);
            for (int k = 0; k < K; ++k) {
                if (fs.fits[k]) {
                    std::gamma_distribution<double> gd(fs.fits[k]->shape, fs.fits[k]->scale);
                    harvested(k) = gd(rng);
                } else {
                    harvested(k) = fs.means[k];
                }
            }
        }

        for (int k = 0; k < K; ++k) {
            const double next = std::clamp(energy(k) + harvested(k) - consumed, 0.0, ef);
            energy(k) = next;
            const int ns = energy_state(next, ef, M);
            if (ns > state[k]) ++rep.transitions[k].up;
            else if (ns < state[k]) ++rep.transitions[k].down;
            else ++rep.transitions[k].stay;
            state[k] = ns;
            if (opts.log && n % opts.log_decimation == 0) {
                opts.log->push_back({n, k, energy(k), ns, harvested(k), consumed,
                                     decision.scheme, decision.target_ue});
            }
        }

        period_sum += harvested.sum();
        period_per_ue += harvested;
        if ((n + 1) % pa_period == 0 || n + 1 == n_intervals) {
            ledger_sum += period_sum;
            ledger_min += period_per_ue(period_target);
            ++ledger_periods;
            period_sum = 0.0;
            period_per_ue.setZero();
        }
    }

    rep.intervals = n_intervals;
    rep.final_energy = energy;
    rep.final_state = state;
    rep.mean_sum_eh_per_pa = ledger_periods ? ledger_sum / ledger_periods : 0.0;
    rep.mean_min_eh_per_pa = ledger_periods ? ledger_min / ledger_periods : 0.0;
    rep.final_min_energy = energy.minCoeff();
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

std::vector<TransitionTriple> empirical_transitions(const SimReport& report) {
    if (report.intervals < 10000)
        throw std::invalid_argument("empirical_transitions: need at least 1e4 intervals");
    std::vector<TransitionTriple> out;
    out.reserve(report.transitions.size());
    for (const auto& c : report.transitions) out.push_back(c.normalized());
    return out;
}

std::vector<SchemeComparisonRow> scheme_comparison(const NetworkConfig& cfg,
                                                   const std::vector<PaScheme>& schemes,
                                                   long n_intervals, SimMode mode,
                                                   std::uint64_t seed) {
    std::vector<SchemeComparisonRow> rows;
    for (PaScheme s : schemes) {
        Rng rng(seed);
        SimOptions opts;
        opts.mode = mode;
        const SimReport rep = run_trajectory(cfg, s, n_intervals, opts, rng);
        rows.push_back({s, rep.mean_sum_eh_per_pa, rep.mean_min_eh_per_pa,
                        rep.final_min_energy, rep.solver_fallbacks});
    }
    return rows;
}

}  // namespace cfwet
