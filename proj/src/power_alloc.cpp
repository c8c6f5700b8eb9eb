#include "cfwet/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfwet/eh_stats.hpp"

namespace cfwet {

PaScheme scheme_from_string(const std::string& name) {
    if (name == "fpc") return PaScheme::fpc;
    if (name == "epa") return PaScheme::epa;
    if (name == "ccpa") return PaScheme::ccpa;
    if (name == "opt") return PaScheme::opt;
    throw std::invalid_argument("unknown power-allocation scheme '" + name + "'");
}

std::string scheme_to_string(PaScheme s) {
    switch (s) {
        case PaScheme::fpc: return "fpc";
        case PaScheme::epa: return "epa";
        case PaScheme::ccpa: return "ccpa";
        case PaScheme::opt: return "opt";
    }
    return "?";
}

int select_min_ue(const Eigen::VectorXd& energies) {
    if (energies.size() == 0) throw std::invalid_argument("select_min_ue: empty energy vector");
    int best = 0;
    for (int k = 1; k < energies.size(); ++k) {
        if (energies(k) < energies(best)) best = k;
    }
    return best;
}

PaDecision fpc(const LargeScaleState& ls, const NetworkConfig& cfg) {
    PaDecision d;
    d.scheme = PaScheme::fpc;
    d.allocation = Eigen::MatrixXd::Constant(
        ls.K, ls.L, cfg.total_power_w / (static_cast<double>(ls.K) * ls.L));
    return d;
}

PaDecision epa(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg) {
    if (kbar < 0 || kbar >= ls.K) throw std::invalid_argument("epa: bad target UE");
    PaDecision d;
    d.scheme = PaScheme::epa;
    d.target_ue = kbar;
    d.allocation = Eigen::MatrixXd::Zero(ls.K, ls.L);
    d.allocation.row(kbar).setConstant(cfg.total_power_w / ls.L);
    return d;
}

PaDecision ccpa(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg,
                const ChannelRealization* fresh) {
    if (kbar < 0 || kbar >= ls.K) throw std::invalid_argument("ccpa: bad target UE");
    Eigen::VectorXd norms(ls.L);
    if (cfg.ccpa_expected_norms) {
        for (int l = 0; l < ls.L; ++l)
            norms(l) = std::sqrt(ls.N * (ls.varsig(kbar, l) + ls.gamma(kbar, l)));
    } else {
        if (!fresh)
            throw std::invalid_argument("ccpa: instantaneous mode needs a fresh realization");
        for (int l = 0; l < ls.L; ++l) norms(l) = fresh->ghat[kbar * ls.L + l].norm();
    }
    const double total = norms.sum();
    if (total <= 0.0) throw std::invalid_argument("ccpa: all estimate norms are zero");
    PaDecision d;
    d.scheme = PaScheme::ccpa;
    d.target_ue = kbar;
    d.allocation = Eigen::MatrixXd::Zero(ls.K, ls.L);
    d.allocation.row(kbar) = norms.transpose() * (cfg.total_power_w / total);
    return d;
}

namespace {

std::vector<std::vector<int>> coupled_components(const Eigen::MatrixXd& row, double threshold) {
    const int L = static_cast<int>(row.rows());
    const double cmax = row.maxCoeff();
    std::vector<std::vector<int>> adj(L);
    for (int l = 0; l < L; ++l) {
        for (int lp = l + 1; lp < L; ++lp) {
            if (row(l, lp) > threshold * cmax) {
                adj[l].push_back(lp);
                adj[lp].push_back(l);
            }
        }
    }
    std::vector<bool> seen(L, false);
    std::vector<std::vector<int>> comps;
    for (int s = 0; s < L; ++s) {
        if (seen[s]) continue;
        std::vector<int> stack{s}, comp;
        seen[s] = true;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (int v : adj[u]) {
                if (!seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

}  // namespace

PaDecision optimized_pa(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg,
                        const OptOptions& opts) {
    if (kbar < 0 || kbar >= ls.K) throw std::invalid_argument("optimized_pa: bad target UE");
    const int K = ls.K, L = ls.L;
    const double p = cfg.total_power_w;

    std::vector<Eigen::MatrixXd> C(K, Eigen::MatrixXd(L, L));
    for (int i = 0; i < K; ++i) {
        for (int l = 0; l < L; ++l) {
            for (int lp = 0; lp < L; ++lp) {
                C[i](l, lp) = std::max(
                    ls.kappa(i, l) * ls.kappa(i, lp) * xi_term(i, kbar, l, lp, ls).real(), 0.0);
            }
        }
    }

    PaSolverReport rep;
    double best_val = -1.0;
    Eigen::MatrixXd best_alloc;
    for (int i = 0; i < K; ++i) {
        if (C[i].maxCoeff() <= 0.0) continue;
        for (const auto& comp : coupled_components(C[i], opts.coupling_threshold)) {
            Eigen::MatrixXd alloc = Eigen::MatrixXd::Zero(K, L);
            if (comp.size() == 1) {
                alloc(i, comp[0]) = p;
            } else {
                const int nc = static_cast<int>(comp.size());
                Eigen::MatrixXd sub(nc, nc);
                for (int a = 0; a < nc; ++a)
                    for (int b = 0; b < nc; ++b) sub(a, b) = C[i](comp[a], comp[b]);
                const SocpProblem sp = build_problem_from_coefficients({sub}, p);
                const SolveResult sr = solve(sp, opts.solver);
                ++rep.subproblems;
                rep.iterations += sr.report.iterations;
                rep.max_r_dual = std::max(rep.max_r_dual, sr.report.r_dual_norm);
                rep.max_r_pri = std::max(rep.max_r_pri, sr.report.r_pri_norm);
                rep.max_eta = std::max(rep.max_eta, sr.report.eta);
                if (!sr.report.converged) ++rep.unconverged;
                const Eigen::MatrixXd sub_om = sr.omega(sp);
                for (int a = 0; a < nc; ++a) alloc(i, comp[a]) = sub_om(0, a);
            }
            const double val = mean_received_power(kbar, alloc, ls);
            if (val > best_val) {
                best_val = val;
                best_alloc = alloc;
            }
        }
    }

    NetworkConfig ccpa_cfg = cfg;
    ccpa_cfg.ccpa_expected_norms = true;
    const PaDecision fallback = ccpa(kbar, ls, ccpa_cfg);
    const double fallback_val = mean_received_power(kbar, fallback.allocation, ls);

    PaDecision d;
    d.scheme = PaScheme::opt;
    d.target_ue = kbar;
    if (best_val < fallback_val) {
        rep.fell_back_to_ccpa = true;
        d.allocation = fallback.allocation;
    } else {
        d.allocation = best_alloc;
    }
    d.solver = rep;
    return d;
}

}  // namespace cfwet
