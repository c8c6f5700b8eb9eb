#include "cfwet/socp.hpp"

#include <cmath>
#include <stdexcept>

#include "cfwet/eh_stats.hpp"

namespace cfwet {

double SocpProblem::objective_value(const Eigen::MatrixXd& Omega) const {
    double tot = 0.0;
    for (int i = 0; i < K; ++i) {
        for (int l = 0; l < L; ++l) {
            for (int lp = 0; lp < L; ++lp) {
                tot += coeff[i](l, lp) * std::sqrt(Omega(i, l) * Omega(i, lp));
            }
        }
    }
    return tot;
}

SocpProblem build_problem_from_coefficients(const std::vector<Eigen::MatrixXd>& C,
                                            double budget) {
    if (C.empty()) throw std::invalid_argument("build_problem: no coefficient rows");
    if (budget <= 0.0) throw std::invalid_argument("build_problem: budget must be positive");
    SocpProblem p;
    p.K = static_cast<int>(C.size());
    p.L = static_cast<int>(C[0].rows());
    p.budget = budget;
    p.coeff = C;
    p.n_omega = p.K * p.L;
    const int npairs = p.L * (p.L - 1) / 2;
    p.n = 2 * p.n_omega + p.K * npairs;
    p.m_report = p.K * p.L * p.L + p.K * p.L;

    double cmax = 0.0;
    for (const auto& m : C) {
        if (m.rows() != p.L || m.cols() != p.L)
            throw std::invalid_argument("build_problem: coefficient shape mismatch");
        if ((m.array() < 0.0).any())
            throw std::invalid_argument("build_problem: negative coefficient (clamp first)");
        cmax = std::max(cmax, m.maxCoeff());
    }
    p.obj_scale = cmax > 0.0 ? cmax : 1.0;

    auto oi = [&](int i, int l) { return i * p.L + l; };
    p.c = Eigen::VectorXd::Zero(p.n);
    int vidx = 2 * p.n_omega;
    for (int i = 0; i < p.K; ++i) {
        for (int l = 0; l < p.L; ++l) p.c(oi(i, l)) = -C[i](l, l) / p.obj_scale;
        for (int l = 0; l < p.L; ++l) {
            for (int lp = l + 1; lp < p.L; ++lp) {
                p.cones.push_back({oi(i, l), oi(i, lp), vidx});
                p.c(vidx) = -2.0 * C[i](l, lp) / p.obj_scale;
                ++vidx;
            }
        }
    }
    p.eq_a = Eigen::MatrixXd::Zero(p.n_omega, p.n);
    p.eq_b = Eigen::VectorXd::Constant(p.n_omega, budget);
    for (int r = 0; r < p.n_omega; ++r) {
        p.eq_a(r, r) = 1.0;
        p.eq_a(r, p.n_omega + r) = 1.0;
    }
    return p;
}

SocpProblem build_problem(int kbar, const LargeScaleState& ls, const NetworkConfig& cfg) {
    std::vector<Eigen::MatrixXd> C(ls.K, Eigen::MatrixXd(ls.L, ls.L));
    for (int i = 0; i < ls.K; ++i) {
        for (int l = 0; l < ls.L; ++l) {
            for (int lp = 0; lp < ls.L; ++lp) {
                const double v = ls.kappa(i, l) * ls.kappa(i, lp) *
                                 xi_term(i, kbar, l, lp, ls).real();
                C[i](l, lp) = std::max(v, 0.0);
            }
        }
    }
    return build_problem_from_coefficients(C, cfg.total_power_w);
}

Eigen::VectorXd constraint_values(const SocpProblem& p, const Eigen::VectorXd& x) {
    Eigen::VectorXd g(p.num_ineq());
    int r = 0;
    for (const auto& [a, b, v] : p.cones) g(r++) = x(v) * x(v) - x(a) * x(b);
    g(r++) = x.head(p.n_omega).sum() - p.budget;
    for (int i = 0; i < p.n_omega; ++i) g(r++) = -x(i);
    for (int i = 0; i < p.n_omega; ++i) g(r++) = -x(p.n_omega + i);
    return g;
}

Eigen::MatrixXd constraint_jacobian(const SocpProblem& p, const Eigen::VectorXd& x) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(p.num_ineq(), p.n);
    int r = 0;
    for (const auto& [a, b, v] : p.cones) {
        j(r, a) = -x(b);
        j(r, b) = -x(a);
        j(r, v) = 2.0 * x(v);
        ++r;
    }
    j.row(r++).head(p.n_omega).setOnes();
    for (int i = 0; i < p.n_omega; ++i) j(r++, i) = -1.0;
    for (int i = 0; i < p.n_omega; ++i) j(r++, p.n_omega + i) = -1.0;
    return j;
}

Eigen::VectorXd kkt_residual(const SocpProblem& p, const SolverState& s, double t) {
    const Eigen::VectorXd g = constraint_values(p, s.x);
    if ((g.array() >= 0.0).any())
        throw std::domain_error("kkt_residual: iterate not strictly interior");
    const Eigen::MatrixXd j = constraint_jacobian(p, s.x);
    const int m = p.num_ineq();
    Eigen::VectorXd r(p.n + m + p.n_omega);
    r.head(p.n) = p.c + j.transpose() * s.mu + p.eq_a.transpose() * s.lam;
    r.segment(p.n, m) = -s.mu.cwiseProduct(g).array() - 1.0 / t;
    r.tail(p.n_omega) = p.eq_a * s.x - p.eq_b;
    return r;
}

Eigen::VectorXd newton_step(const SocpProblem& p, const SolverState& s, double t) {
    const int n = p.n, m = p.num_ineq(), na = p.n_omega;
    const Eigen::VectorXd g = constraint_values(p, s.x);
    const Eigen::MatrixXd j = constraint_jacobian(p, s.x);
    const Eigen::VectorXd rt = kkt_residual(p, s, t);

    // Hessian of the Lagrangian inequality part (the objective is linear).
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < p.cones.size(); ++q) {
        const auto& [a, b, v] = p.cones[q];
        h(v, v) += 2.0 * s.mu(q);
        h(a, b) += -s.mu(q);
        h(b, a) += -s.mu(q);
    }
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m + na, n + m + na);
    kkt.topLeftCorner(n, n) = h;
    kkt.block(0, n, n, m) = j.transpose();
    kkt.block(0, n + m, n, na) = p.eq_a.transpose();
    kkt.block(n, 0, m, n) = (-s.mu).asDiagonal() * j;
    kkt.block(n, n, m, m) = (-g).asDiagonal();
    kkt.block(n + m, 0, na, n) = p.eq_a;

    auto try_solve = [&](const Eigen::MatrixXd& mat) {
        Eigen::VectorXd dy = mat.partialPivLu().solve(-rt);
        const double resid = (mat * dy + rt).norm() / std::max(rt.norm(), 1e-300);
        return std::pair{dy, resid};
    };
    auto [dy, resid] = try_solve(kkt);
    if (!dy.allFinite() || resid > 1e-10) {
        Eigen::MatrixXd reg = kkt;
        reg.diagonal().array() += 1e-12;
        auto [dy2, resid2] = try_solve(reg);
        if (dy2.allFinite() && (resid2 < resid || !dy.allFinite())) {
            dy = dy2;
            resid = resid2;
        }
    }
    if (!dy.allFinite()) throw std::runtime_error("newton_step: singular KKT system");
    return dy;
}

namespace {

SolverState advance(const SolverState& s, const Eigen::VectorXd& dy, double alpha,
                    const SocpProblem& p) {
    const int n = p.n, m = p.num_ineq();
    SolverState out;
    out.x = s.x + alpha * dy.head(n);
    out.mu = s.mu + alpha * dy.segment(n, m);
    out.lam = s.lam + alpha * dy.tail(p.n_omega);
    return out;
}

}  // namespace

double line_search(const SocpProblem& p, const SolverState& s, const Eigen::VectorXd& dy,
                   double t, double q_ls, double beta_ls) {
    const int n = p.n, m = p.num_ineq();
    const Eigen::VectorXd dmu = dy.segment(n, m);
    double alpha_max = 1.0;
    for (int i = 0; i < m; ++i) {
        if (dmu(i) < 0.0) alpha_max = std::min(alpha_max, -s.mu(i) / dmu(i));
    }
    double alpha = 0.99 * alpha_max;
    const double base = kkt_residual(p, s, t).norm();
    while (alpha >= 1e-16) {
        const SolverState cand = advance(s, dy, alpha, p);
        if ((constraint_values(p, cand.x).array() < 0.0).all()) {
            if (kkt_residual(p, cand, t).norm() <= (1.0 - alpha * beta_ls) * base) return alpha;
        }
        alpha *= q_ls;
    }
    return 0.0;
}

SolveResult solve(const SocpProblem& p, const SolveOptions& opts) {
    const int n = p.n, m = p.num_ineq(), na = p.n_omega;
    const double rho = opts.rho > 0.0 ? opts.rho : 1.0 + 1.0 / std::sqrt(static_cast<double>(m));

    SolverState s;
    s.x = Eigen::VectorXd::Zero(n);
    s.x.head(na).setConstant(p.budget / (2.0 * na));
    s.x.segment(na, na) = Eigen::VectorXd::Constant(na, p.budget) - s.x.head(na);
    for (const auto& [a, b, v] : p.cones) s.x(v) = 0.5 * std::sqrt(s.x(a) * s.x(b));
    s.mu = Eigen::VectorXd::Ones(m);
    s.lam = Eigen::VectorXd::Zero(na);

    SolveResult res;
    for (int it = 0; it < opts.max_iter; ++it) {
        const Eigen::VectorXd g = constraint_values(p, s.x);
        const double eta = -g.dot(s.mu);
        const double t = rho * m / eta;
        const Eigen::VectorXd rt = kkt_residual(p, s, t);
        const double rd = rt.head(n).norm();
        const double rp = rt.tail(na).norm();
        if (rd <= opts.eps_feas && rp <= opts.eps_feas && eta <= opts.eps) {
            res.x = s.x;
            res.report = {true, it, eta, rd, rp, ""};
            return res;
        }
        Eigen::VectorXd dy;
        try {
            dy = newton_step(p, s, t);
        } catch (const std::runtime_error& e) {
            res.x = s.x;
            res.report = {false, it, eta, rd, rp, e.what()};
            return res;
        }
        const double alpha = line_search(p, s, dy, t, opts.q_ls, opts.beta_ls);
        if (opts.trace) opts.trace->push_back({it, t, eta, rd, rp, alpha});
        if (alpha == 0.0) {
            res.x = s.x;
            res.report = {false, it, eta, rd, rp, "line-search step underflow"};
            return res;
        }
        s = advance(s, dy, alpha, p);
    }
    const Eigen::VectorXd g = constraint_values(p, s.x);
    const double eta = -g.dot(s.mu);
    const Eigen::VectorXd rt = kkt_residual(p, s, rho * m / eta);
    res.x = s.x;
    res.report = {false, opts.max_iter, eta, rt.head(n).norm(), rt.tail(na).norm(),
                  "iteration limit reached"};
    return res;
}

Eigen::MatrixXd SolveResult::omega(const SocpProblem& p) const {
    Eigen::MatrixXd om(p.K, p.L);
    for (int i = 0; i < p.K; ++i)
        for (int l = 0; l < p.L; ++l) om(i, l) = std::max(x(i * p.L + l), 0.0);
    return om;
}

double hessian_quadratic_form(const Eigen::MatrixXd& Omega, const Eigen::MatrixXd& v,
                              const SocpProblem& p) {
    if ((Omega.array() <= 0.0).any())
        throw std::invalid_argument("hessian_quadratic_form: allocation must be strictly positive");
    double tot = 0.0;
    for (int i = 0; i < p.K; ++i) {
        for (int l = 0; l < p.L; ++l) {
            for (int lp = l + 1; lp < p.L; ++lp) {
                // Unordered pair appears twice in the objective; each
                // sqrt(Omega Omega') contributes -sqrt/4 (v/O - v'/O')^2.
                const double d = v(i, l) / Omega(i, l) - v(i, lp) / Omega(i, lp);
                tot += -0.5 * p.coeff[i](l, lp) * std::sqrt(Omega(i, l) * Omega(i, lp)) * d * d;
            }
        }
    }
    return tot;
}

double newton_step_bound(int m, double t0, double eps, double rho, double alpha,
                         double beta_ls) {
    if (rho <= 1.0) throw std::invalid_argument("newton_step_bound: rho must exceed 1");
    if (alpha >= 0.5 || alpha <= 0.0)
        throw std::invalid_argument("newton_step_bound: alpha must lie in (0, 0.5)");
    const double gam = alpha * beta_ls * (1.0 - 2.0 * alpha) * (1.0 - 2.0 * alpha) /
                       (20.0 - 8.0 * alpha);
    const double c = std::log2(std::log2(1.0 / eps));
    const double outer = std::ceil(std::log(m / (t0 * eps)) / std::log(rho));
    return outer * (m * (rho - 1.0 - std::log(rho)) / gam + c);
}

}  // namespace cfwet
