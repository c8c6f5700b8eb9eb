#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfwet/channel.hpp"
#include "cfwet/config.hpp"

namespace cfwet {

// Cone program for the downlink power allocation:
//   max sum_i sum_{l,l'} coeff[i](l,l') sqrt(Omega_il Omega_il')
//   s.t. sum Omega <= budget, Omega >= 0, Omega + Omega_slack = budget,
// with one geometric-mean auxiliary v per (i, l<l') pair (the symmetric
// (l',l) partner shares it) and v^2 <= Omega_il Omega_il' cones. Diagonal
// pairs reduce to Omega itself and carry no cone.
struct SocpProblem {
    int K = 0, L = 0;
    int n_omega = 0;                        // K*L
    int n = 0;                              // 2*K*L + K*L*(L-1)/2 variables
    std::vector<std::array<int, 3>> cones;  // indices (omega_a, omega_b, v)
    Eigen::VectorXd c;       // minimization objective over x (normalized scale)
    double obj_scale = 1.0;  // normalized objective * obj_scale = watts
    Eigen::MatrixXd eq_a;    // equality rows: Omega + slack = budget per (k,l)
    Eigen::VectorXd eq_b;
    double budget = 0.0;
    int m_report = 0;        // K L^2 + K L, the unreduced constraint count
    std::vector<Eigen::MatrixXd> coeff;  // per UE: L x L clamped coefficients (watts scale)

    int num_ineq() const { return static_cast<int>(cones.size()) + 1 + 2 * n_omega; }
    // Objective in watts at an allocation (uses the clamped coefficients).
    double objective_value(const Eigen::MatrixXd& Omega) const;
};

// Builds the instance from arbitrary symmetric non-negative coefficients
// (C[i] is L x L); coefficients are normalized internally so the solver
// tolerances are scale-free.
SocpProblem build_problem_from_coefficients(const std::vector<Eigen::MatrixXd>& C,
                                            double budget);

// Coefficients kappa_il kappa_il' Xi_{i kbar, ll'} (real part, negative
// values clamped to zero), then the generic builder.
SocpProblem build_problem(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg);

struct SolverState {
    Eigen::VectorXd x, mu, lam;
};

// Inequality values g(x) (< 0 strictly interior) and Jacobian.
Eigen::VectorXd constraint_values(const SocpProblem& p, const Eigen::VectorXd& x);
Eigen::MatrixXd constraint_jacobian(const SocpProblem& p, const Eigen::VectorXd& x);

// Stacked (r_dual, r_cent, r_pri) at barrier parameter t.
Eigen::VectorXd kkt_residual(const SocpProblem& p, const SolverState& s, double t);

// Solves the KKT system for (dx, dmu, dlam); dense LU with one Tikhonov
// retry on failure.
Eigen::VectorXd newton_step(const SocpProblem& p, const SolverState& s, double t);

// Backtracking line search: start at 0.99 * alpha_max, shrink by q_ls while
// infeasible or the residual-descent test fails. Returns 0 on underflow.
double line_search(const SocpProblem& p, const SolverState& s, const Eigen::VectorXd& dy,
                   double t, double q_ls, double beta_ls);

struct TraceRow {
    int iter;
    double t, eta, r_dual, r_pri, alpha;
};

struct SolveOptions {
    double rho = 0.0;  // 0 = auto: 1 + 1/sqrt(num_ineq)
    double eps = 1e-8;
    double eps_feas = 1e-9;
    double beta_ls = 0.01;
    double q_ls = 0.5;
    int max_iter = 3000;
    std::vector<TraceRow>* trace = nullptr;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double eta = 0.0, r_dual_norm = 0.0, r_pri_norm = 0.0;
    std::string failure_reason;
};

struct SolveResult {
    Eigen::VectorXd x;  // best iterate (optimal when converged)
    SolveReport report;
    Eigen::MatrixXd omega(const SocpProblem& p) const;  // K x L power block
};

SolveResult solve(const SocpProblem& p, const SolveOptions& opts = {});

// v^T H v of the concave objective sum coeff sqrt(Omega Omega') at a strictly
// positive allocation; non-positive by Cauchy-Schwarz.
double hessian_quadratic_form(const Eigen::MatrixXd& Omega, const Eigen::MatrixXd& v,
                              const SocpProblem& p);

// Worst-case Newton-iteration bound of the short-step analysis.
double newton_step_bound(int m, double t0, double eps, double rho, double alpha,
                         double beta_ls);

}  // namespace cfwet
