// Command-line front end: config parsing, experiment orchestration, CSV and
// run-manifest emission. All numeric CSV output uses round-trip precision and
// every artifact is reproducible byte-for-byte from (config, seed).
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfwet/channel.hpp"
#include "cfwet/config.hpp"
#include "cfwet/eh_stats.hpp"
#include "cfwet/markov.hpp"
#include "cfwet/power_alloc.hpp"
#include "cfwet/sim.hpp"
#include "cfwet/socp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cfwet;

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct Run {
    NetworkConfig cfg;
    std::uint64_t seed = 0;
    fs::path out;
    std::vector<std::string> artifacts;

    std::ofstream open_csv(const std::string& name) {
        fs::create_directories(out);
        std::ofstream f(out / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (out / name).string());
        artifacts.push_back(name);
        return f;
    }

    void write_manifest(const std::string& command, json extra = json::object()) {
        json m;
        m["command"] = command;
        m["seed"] = seed;
        const std::string cfg_text = config_to_json_text(cfg);
        m["config"] = json::parse(cfg_text);
        m["config_hash"] = fnv1a(cfg_text);
        m["versions"] = {{"tool", kToolVersion},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                       std::to_string(EIGEN_MINOR_VERSION)}};
        m["artifacts"] = artifacts;
        for (auto& [k, v] : extra.items()) m[k] = v;
        fs::create_directories(out);
        std::ofstream f(out / "manifest.json", std::ios::binary);
        f << m.dump(2) << "\n";
    }
};

LargeScaleState make_scenario(const NetworkConfig& cfg, Rng& rng) {
    const Geometry geo = place_network(cfg, rng);
    return make_large_scale(geo, cfg, rng);
}

// Allocation for a named scheme; CCPA uses expected estimate norms here (no
// instantaneous draw is associated with a one-shot solve).
PaDecision decide(PaScheme scheme, int kbar, const LargeScaleState& ls, const NetworkConfig& cfg,
                  const OptOptions& oo = {}) {
    switch (scheme) {
        case PaScheme::fpc: return fpc(ls, cfg);
        case PaScheme::epa: return epa(kbar, ls, cfg);
        case PaScheme::ccpa: {
            NetworkConfig c2 = cfg;
            c2.ccpa_expected_norms = true;
            return ccpa(kbar, ls, c2);
        }
        case PaScheme::opt: return optimized_pa(kbar, ls, cfg, oo);
    }
    throw std::invalid_argument("bad scheme");
}

int cmd_simulate(Run& run, const std::string& scheme, const std::string& mode, long intervals,
                 long decimation) {
    Rng rng(run.seed);
    std::vector<TrajectoryRow> log;
    SimOptions so;
    so.mode = sim_mode_from_string(mode);
    so.log = &log;
    so.log_decimation = decimation > 0 ? decimation : std::max<long>(1, intervals / 10000);
    const SimReport rep = run_trajectory(run.cfg, scheme_from_string(scheme), intervals, so, rng);

    auto traj = run.open_csv("trajectory.csv");
    traj << "interval,ue,energy_J,state,harvested_J,consumed_J,scheme,target_ue\n";
    for (const auto& r : log) {
        traj << r.interval << ',' << r.ue << ',' << num(r.energy_j) << ',' << r.state << ','
             << num(r.harvested_j) << ',' << num(r.consumed_j) << ','
             << scheme_to_string(r.scheme) << ',' << r.target_ue << '\n';
    }
    auto sum = run.open_csv("summary.csv");
    sum << "ue,final_energy_J,final_state,p_down,p_stay,p_up\n";
    for (int k = 0; k < run.cfg.num_ues; ++k) {
        const auto t = rep.transitions[k].normalized();
        sum << k << ',' << num(rep.final_energy(k)) << ',' << rep.final_state[k] << ','
            << num(t.down) << ',' << num(t.stay) << ',' << num(t.up) << '\n';
    }
    run.write_manifest("simulate",
                       {{"scheme", scheme},
                        {"mode", mode},
                        {"intervals", intervals},
                        {"log_decimation", so.log_decimation},
                        {"mean_sum_eh_per_pa_J", rep.mean_sum_eh_per_pa},
                        {"mean_min_eh_per_pa_J", rep.mean_min_eh_per_pa},
                        {"final_min_energy_J", rep.final_min_energy},
                        {"solver_fallbacks", rep.solver_fallbacks},
                        {"solver_unconverged", rep.solver_unconverged}});
    std::cout << "simulate: " << intervals << " intervals, final min energy "
              << num(rep.final_min_energy) << " J, wall " << rep.wall_seconds << " s\n";
    return 0;
}

int cmd_validate_stats(Run& run, long samples) {
    Rng rng(run.seed);
    const LargeScaleState ls = make_scenario(run.cfg, rng);
    const PaDecision alloc = fpc(ls, run.cfg);
    const double tau_h = run.cfg.harvest_duration_s();
    const double mean_tol = 0.01, var_tol = 0.05;

    auto f = run.open_csv("validate_stats.csv");
    f << "ue,closed_mean_W,mc_mean_W,rel_mean_err,exact_var_W2,mc_var_W2,rel_var_err,pass\n";
    bool all_pass = true;
    for (int k = 0; k < ls.K; ++k) {
        const double cm = mean_received_power(k, alloc.allocation, ls);
        const double cv = var_received_power(k, alloc.allocation, ls);
        const McStats mc = mc_oracle(k, alloc.allocation, ls, run.cfg.eh_circuit, tau_h,
                                     static_cast<std::size_t>(samples), rng);
        const double em = std::abs(cm - mc.mean_input) / mc.mean_input;
        const double ev = std::abs(cv - mc.var_input) / mc.var_input;
        const bool pass = em < mean_tol && ev < var_tol;
        all_pass = all_pass && pass;
        f << k << ',' << num(cm) << ',' << num(mc.mean_input) << ',' << num(em) << ',' << num(cv)
          << ',' << num(mc.var_input) << ',' << num(ev) << ',' << (pass ? 1 : 0) << '\n';
        std::cout << "ue " << k << ": mean rel err " << num(em) << ", var rel err " << num(ev)
                  << (pass ? " pass" : " FAIL") << "\n";
    }
    run.write_manifest("validate-stats", {{"samples", samples},
                                          {"mean_tolerance", mean_tol},
                                          {"var_tolerance", var_tol},
                                          {"pass", all_pass}});
    return all_pass ? 0 : 1;
}

int cmd_solve_pa(Run& run, const std::string& scheme, int target, bool trace) {
    Rng rng(run.seed);
    const LargeScaleState ls = make_scenario(run.cfg, rng);
    std::vector<TraceRow> trace_rows;
    OptOptions oo;
    if (trace) oo.solver.trace = &trace_rows;
    const PaDecision d = decide(scheme_from_string(scheme), target, ls, run.cfg, oo);

    auto a = run.open_csv("allocation.csv");
    a << "ue,ap,omega_W\n";
    for (int k = 0; k < ls.K; ++k)
        for (int l = 0; l < ls.L; ++l) a << k << ',' << l << ',' << num(d.allocation(k, l)) << '\n';
    if (trace) {
        auto t = run.open_csv("solver_trace.csv");
        t << "row,iter,t,eta,r_dual,r_pri,alpha\n";
        for (std::size_t i = 0; i < trace_rows.size(); ++i) {
            const auto& r = trace_rows[i];
            t << i << ',' << r.iter << ',' << num(r.t) << ',' << num(r.eta) << ','
              << num(r.r_dual) << ',' << num(r.r_pri) << ',' << num(r.alpha) << '\n';
        }
    }
    json extra = {{"scheme", scheme},
                  {"target_ue", target},
                  {"objective_W", mean_received_power(target, d.allocation, ls)},
                  {"total_allocated_W", d.allocation.sum()}};
    if (d.solver) {
        extra["solver"] = {{"iterations", d.solver->iterations},
                           {"subproblems", d.solver->subproblems},
                           {"unconverged", d.solver->unconverged},
                           {"max_r_dual", d.solver->max_r_dual},
                           {"max_r_pri", d.solver->max_r_pri},
                           {"max_eta", d.solver->max_eta},
                           {"fell_back_to_ccpa", d.solver->fell_back_to_ccpa}};
    }
    run.write_manifest("solve-pa", extra);
    std::cout << "solve-pa: scheme " << scheme << ", objective "
              << num(mean_received_power(target, d.allocation, ls)) << " W\n";
    return 0;
}

int cmd_transition_table(Run& run, const std::string& scheme) {
    const long ln = static_cast<long>(run.cfg.num_aps) * run.cfg.antennas_per_ap;
    auto f = run.open_csv("transition_table.csv");
    f << "L,N,mean_input_W,mean_eh_J,consumed_J,p_down,p_stay,p_up\n";
    std::vector<double> pups;
    for (int L : {4, 9, 16, 25, 36}) {
        NetworkConfig cfg = run.cfg;
        cfg.num_aps = L;
        cfg.antennas_per_ap = std::max(1, static_cast<int>(std::lround(double(ln) / L)));
        Rng rng(run.seed);
        const LargeScaleState ls = make_scenario(cfg, rng);
        const int kbar = 0;
        const PaDecision d = decide(scheme_from_string(scheme), kbar, ls, cfg);
        ReceivedPowerAnalyzer an(kbar, ls);
        const double mi = an.mean(d.allocation), vi = an.variance(d.allocation);
        const double tau_h = cfg.harvest_duration_s();
        const double me = mean_harvested_energy(mi, cfg.eh_circuit, tau_h);
        const double ve = var_harvested_energy(mi, vi, cfg.eh_circuit, tau_h);
        const double ec = energy_consumption(cfg);
        const GammaFit fit = gamma_fit(me, ve);
        const TransitionTriple t =
            transition_triple(me - ec, ec, fit, cfg.num_states, cfg.battery_capacity_j);
        pups.push_back(t.up);
        f << L << ',' << cfg.antennas_per_ap << ',' << num(mi) << ',' << num(me) << ',' << num(ec)
          << ',' << num(t.down) << ',' << num(t.stay) << ',' << num(t.up) << '\n';
    }
    run.write_manifest("transition-table", {{"scheme", scheme}, {"total_antennas", ln}});
    std::cout << "transition-table: p_up ";
    for (double p : pups) std::cout << num(p) << ' ';
    std::cout << "\n";
    return 0;
}

int cmd_compare_schemes(Run& run, const std::string& mode, long intervals) {
    const std::vector<PaScheme> schemes{PaScheme::fpc, PaScheme::epa, PaScheme::ccpa,
                                        PaScheme::opt};
    const auto rows =
        scheme_comparison(run.cfg, schemes, intervals, sim_mode_from_string(mode), run.seed);
    auto f = run.open_csv("compare_schemes.csv");
    f << "scheme,mean_sum_eh_per_pa_J,mean_min_eh_per_pa_J,final_min_energy_J,solver_fallbacks\n";
    for (const auto& r : rows) {
        f << scheme_to_string(r.scheme) << ',' << num(r.mean_sum_eh_per_pa) << ','
          << num(r.mean_min_eh_per_pa) << ',' << num(r.final_min_energy) << ','
          << r.solver_fallbacks << '\n';
        std::cout << scheme_to_string(r.scheme) << ": sum-EH/PA " << num(r.mean_sum_eh_per_pa)
                  << " J\n";
    }
    run.write_manifest("compare-schemes", {{"mode", mode}, {"intervals", intervals}});
    return 0;
}

int cmd_complexity(Run& run) {
    const int K = run.cfg.num_ues, L = run.cfg.num_aps;
    const int m = K * L * L + K * L;
    const double rho = 1.0 + 1.0 / std::sqrt(double(m));
    const double t0 = 1.0, eps = 1e-8, alpha = 0.1, beta_ls = 0.01;
    const double q = newton_step_bound(m, t0, eps, rho, alpha, beta_ls);
    auto f = run.open_csv("complexity.csv");
    f << "K,L,m,rho,t0,eps,alpha,beta_ls,newton_step_bound\n";
    f << K << ',' << L << ',' << m << ',' << num(rho) << ',' << num(t0) << ',' << num(eps) << ','
      << num(alpha) << ',' << num(beta_ls) << ',' << num(q) << '\n';
    run.write_manifest("complexity", {{"m", m}, {"newton_step_bound", q}});
    std::cout << "complexity: m = " << m << ", worst-case Newton iterations " << num(q) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cell-free wireless-energy-transfer simulation and power-allocation toolkit"};
    app.require_subcommand(1);
    // Let global options (--preset, --seed, ...) appear after the subcommand.
    app.fallthrough();

    std::string config_path, preset = "paper", out_dir = ".";
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    app.add_option("--config", config_path, "JSON config file (missing keys take defaults)");
    app.add_option("--preset", preset, "Scale preset: paper|desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed_override, "RNG seed override")
        ->each([&](const std::string&) { seed_given = true; });

    std::string scheme = "opt", mode = "gamma";
    long intervals = 10000, decimation = 0, samples = 200000;
    int target = 0;
    bool trace = false;

    auto* sim = app.add_subcommand("simulate", "Run a battery-energy trajectory");
    sim->add_option("--scheme", scheme, "fpc|epa|ccpa|opt");
    sim->add_option("--mode", mode, "exact|gamma");
    sim->add_option("--intervals", intervals, "Number of coherence intervals");
    sim->add_option("--log-decimation", decimation, "Trajectory log stride (0 = auto)");

    auto* val = app.add_subcommand("validate-stats", "Closed-form moments vs Monte-Carlo");
    val->add_option("--samples", samples, "Monte-Carlo sample count");

    auto* sol = app.add_subcommand("solve-pa", "One power-allocation decision");
    sol->add_option("--scheme", scheme, "fpc|epa|ccpa|opt");
    sol->add_option("--target", target, "Target UE index");
    sol->add_flag("--trace-solver", trace, "Emit interior-point iteration trace CSV");

    // CCPA default: the optimized scheme at many APs with few antennas couples
    // every AP into one large cone program, which is minutes of dense solves.
    std::string table_scheme = "ccpa";
    auto* tab = app.add_subcommand("transition-table",
                                   "Analytic transition probabilities across AP counts");
    tab->add_option("--scheme", table_scheme, "fpc|epa|ccpa|opt");

    auto* cmp = app.add_subcommand("compare-schemes", "Paired-seed scheme comparison");
    cmp->add_option("--mode", mode, "exact|gamma");
    cmp->add_option("--intervals", intervals, "Number of coherence intervals");

    app.add_subcommand("complexity", "Worst-case interior-point iteration bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Run run;
        run.cfg = config_path.empty() ? preset_config(preset) : config_from_json_file(config_path);
        if (seed_given) run.cfg.rng_seed = seed_override;
        run.seed = run.cfg.rng_seed;
        run.out = out_dir;

        const CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "simulate") return cmd_simulate(run, scheme, mode, intervals, decimation);
        if (name == "validate-stats") return cmd_validate_stats(run, samples);
        if (name == "solve-pa") return cmd_solve_pa(run, scheme, target, trace);
        if (name == "transition-table") return cmd_transition_table(run, table_scheme);
        if (name == "compare-schemes") return cmd_compare_schemes(run, mode, intervals);
        if (name == "complexity") return cmd_complexity(run);
        std::cerr << "unknown command\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
