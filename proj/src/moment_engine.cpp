// Exact moments of the received RF power for one target UE.
//
// Conditioned on the target UE's channels g_k, every AP-summed estimate is
// Gaussian with analytic mean/covariance, so E{I|g} and V{I|g} are closed
// form; the outer expectations over g_k are polynomial moments of iid
// standard complex Gaussians. Each required moment touches at most three
// distinct vectors (the LoS direction and two conditional-mean vectors), so
// g_k is projected onto that span (rank <= 3) plus an independent chi-square
// remainder, and the moment is evaluated by a small monomial engine with
// E[y^a conj(y)^b] = delta_ab a! and E[W^p] = (N-r)(N-r+1)...(N-r+p-1).
#include <array>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cfwet/eh_stats.hpp"

namespace cfwet {

namespace {

using Poly = std::unordered_map<std::uint32_t, cd>;

// Monomial key: 4-bit fields a0 a1 a2 b0 b1 b2 w (exponents of y_t,
// conj(y_t), and the chi-square remainder W).
constexpr std::uint32_t kFieldMask = 0xF;

std::uint32_t key_conj(std::uint32_t key) {
    const std::uint32_t a = key & 0xFFF, b = (key >> 12) & 0xFFF, w = key >> 24;
    return b | (a << 12) | (w << 24);
}

Poly pmul(const Poly& p1, const Poly& p2) {
    Poly out;
    out.reserve(p1.size() * 2 + p2.size());
    for (const auto& [k1, c1] : p1) {
        for (const auto& [k2, c2] : p2) {
            out[k1 + k2] += c1 * c2;  // fields never overflow 4 bits here
        }
    }
    return out;
}

Poly pconj(const Poly& p) {
    Poly out;
    out.reserve(p.size());
    for (const auto& [k, c] : p) out[key_conj(k)] += std::conj(c);
    return out;
}

cd pexpect(const Poly& p, int chi_dof) {
    static const double fact[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    cd tot = 0.0;
    for (const auto& [k, c] : p) {
        const std::uint32_t a = k & 0xFFF, b = (k >> 12) & 0xFFF;
        if (a != b) continue;
        double m = 1.0;
        for (int t = 0; t < 3; ++t) m *= fact[(a >> (4 * t)) & kFieldMask];
        const std::uint32_t w = (k >> 24) & kFieldMask;
        for (std::uint32_t j = 0; j < w; ++j) m *= chi_dof + static_cast<int>(j);
        tot += c * m;
    }
    return tot;
}

struct Factor {
    int ue = -1;
    bool conjugated = false;
};

// Per-(target, AP) moment table with memoization.
class BlockMoments {
  public:
    BlockMoments(Eigen::VectorXcd c_vec, double beta,
                 std::vector<Eigen::VectorXcd> b_vecs, std::vector<double> e_coefs)
        : c_(std::move(c_vec)), beta_(beta), b_(std::move(b_vecs)), e_(std::move(e_coefs)) {}

    cd moment(int qpow, std::vector<Factor> ms) const {
        std::sort(ms.begin(), ms.end(), [](const Factor& x, const Factor& y) {
            return std::tie(x.ue, x.conjugated) < std::tie(y.ue, y.conjugated);
        });
        // Leading byte qpow+1 is nonzero and factor bytes are >= 1, so the
        // packed key decodes uniquely (no leading-zero aliasing).
        std::uint64_t key = static_cast<std::uint64_t>(qpow) + 1;
        for (const auto& f : ms) {
            if (f.ue >= 126) throw std::invalid_argument("moment table: UE index too large");
            key = (key << 8) | static_cast<std::uint64_t>(2 * f.ue + f.conjugated + 1);
        }
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const cd val = compute(qpow, ms);
        cache_.emplace(key, val);
        return val;
    }

  private:
    cd compute(int qpow, const std::vector<Factor>& ms) const {
        const int n = static_cast<int>(c_.size());
        // Basis of the span of {c} and the conditional-mean vectors involved.
        std::vector<Eigen::VectorXcd> basis;
        auto add_vec = [&](const Eigen::VectorXcd& v) {
            Eigen::VectorXcd w = v;
            for (const auto& u : basis) w -= u.dot(w) * u;
            const double nv = v.norm();
            if (w.norm() > 1e-14 * std::max(1.0, nv)) basis.push_back(w.normalized());
        };
        add_vec(c_);
        int last = -1;
        for (const auto& f : ms) {
            if (f.ue != last) add_vec(b_[f.ue]);
            last = f.ue;
        }
        const int r = static_cast<int>(basis.size());
        Eigen::MatrixXcd u_mat(n, r);
        for (int t = 0; t < r; ++t) u_mat.col(t) = basis[t];
        const int chi_dof = n - r;
        const double sb = std::sqrt(beta_);

        auto unit_key = [](int t, bool conj_var) {
            return static_cast<std::uint32_t>(1) << (4 * (conj_var ? t + 3 : t));
        };
        // Q = ||c||^2 + sb (c^H z + z^H c) + beta (||y||^2 + W)
        Poly q;
        const Eigen::VectorXcd c_coords = u_mat.adjoint() * c_;
        q[0] = c_.squaredNorm();
        for (int t = 0; t < r; ++t) {
            q[unit_key(t, false)] += sb * std::conj(c_coords(t));
            q[unit_key(t, true)] += sb * c_coords(t);
            q[unit_key(t, false) + unit_key(t, true)] += beta_;
        }
        q[static_cast<std::uint32_t>(1) << 24] += beta_;  // W term

        Poly p;
        p[0] = 1.0;
        for (int s = 0; s < qpow; ++s) p = pmul(p, q);
        for (const auto& f : ms) {
            // m_i = g^T conj(b_i) + e_i Q; g^T conj(b_i) = c^T conj(b_i) + sb b_i^H z
            Poly m;
            m[0] = b_[f.ue].conjugate().cwiseProduct(c_).sum();
            const Eigen::VectorXcd bi_coords = u_mat.adjoint() * b_[f.ue];
            for (int t = 0; t < r; ++t) m[unit_key(t, false)] += sb * std::conj(bi_coords(t));
            if (e_[f.ue] != 0.0) {
                for (const auto& [k, v] : q) m[k] += e_[f.ue] * v;
            }
            if (f.conjugated) m = pconj(m);
            p = pmul(p, m);
        }
        return pexpect(p, chi_dof);
    }

    Eigen::VectorXcd c_;
    double beta_;
    std::vector<Eigen::VectorXcd> b_;
    std::vector<double> e_;
    mutable std::unordered_map<std::uint64_t, cd> cache_;
};

struct AllocationView {
    Eigen::MatrixXd w;                   // kappa .* sqrt(Omega)
    std::vector<Eigen::MatrixXd> cmat;   // per AP: C_l
    std::vector<double> trace_c;         // T_l
};

}  // namespace

struct ReceivedPowerAnalyzer::Impl {
    int k = 0, K = 0, L = 0;
    Eigen::MatrixXd kappa;                 // copy from the large-scale state
    std::vector<BlockMoments> blocks;      // per AP
    std::vector<Eigen::MatrixXd> cnd;      // per AP: conditional estimate covariance

    cd bm(int l, int qpow, std::vector<Factor> ms) const {
        return blocks[l].moment(qpow, std::move(ms));
    }

    // E[ prod_{t} m-factor_t * Q_{lq}^{qpow} ] with per-factor block indices,
    // factored across independent blocks. At most 4 m-factors plus one Q.
    cd grouped(std::initializer_list<std::pair<int, Factor>> factors, int lq, int qpow) const {
        std::array<std::pair<int, Factor>, 5> fs;
        int nf = 0;
        for (const auto& f : factors) fs[nf++] = f;
        std::sort(fs.begin(), fs.begin() + nf,
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        cd tot = 1.0;
        bool q_done = false;
        int i = 0;
        while (i < nf) {
            const int l = fs[i].first;
            std::vector<Factor> ms;
            for (; i < nf && fs[i].first == l; ++i) ms.push_back(fs[i].second);
            const bool with_q = qpow > 0 && l == lq;
            if (with_q) q_done = true;
            tot *= bm(l, with_q ? qpow : 0, std::move(ms));
        }
        if (qpow > 0 && !q_done) tot *= bm(lq, qpow, {});
        return tot;
    }

    AllocationView view(const Eigen::MatrixXd& Omega) const {
        if (Omega.rows() != K || Omega.cols() != L)
            throw std::invalid_argument("received-power moments: allocation shape mismatch");
        if ((Omega.array() < 0.0).any())
            throw std::invalid_argument("received-power moments: negative power coefficient");
        AllocationView v;
        v.w = kappa.array() * Omega.array().sqrt();
        for (int l = 0; l < L; ++l) {
            const Eigen::VectorXd wl = v.w.col(l);
            v.cmat.push_back((wl * wl.transpose()).cwiseProduct(cnd[l]));
            v.trace_c.push_back(v.cmat.back().trace());
        }
        return v;
    }
};

ReceivedPowerAnalyzer::ReceivedPowerAnalyzer(int k, const LargeScaleState& ls)
    : impl_(std::make_unique<Impl>()) {
    const int K = ls.K, L = ls.L;
    if (k < 0 || k >= K) throw std::invalid_argument("ReceivedPowerAnalyzer: bad UE index");
    if (L > 64) throw std::invalid_argument("ReceivedPowerAnalyzer: too many APs");
    impl_->k = k;
    impl_->K = K;
    impl_->L = L;
    impl_->kappa = ls.kappa;
    const double tpp = ls.pilot_energy;
    for (int l = 0; l < L; ++l) {
        const Eigen::VectorXcd c_vec = std::sqrt(ls.varsig(k, l)) * ls.steer(k, l);
        std::vector<Eigen::VectorXcd> b(K);
        std::vector<double> e(K, 0.0);
        for (int i = 0; i < K; ++i) {
            if (ls.shares_pilot(i, k)) e[i] = ls.c_gain(i, l) * std::sqrt(tpp);
            b[i] = std::sqrt(ls.varsig(i, l)) * ls.steer(i, l) - e[i] * c_vec;
        }
        impl_->blocks.emplace_back(c_vec, ls.beta(k, l), std::move(b), std::move(e));

        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(K, K);
        for (int i = 0; i < K; ++i) {
            double resid = ls.noise_power;
            for (int j : ls.pilot_set[i]) {
                if (j != k) resid += tpp * ls.beta(j, l);
            }
            for (int j = 0; j < K; ++j) {
                if (ls.shares_pilot(i, j))
                    m(i, j) = ls.c_gain(i, l) * ls.c_gain(j, l) * resid;
            }
        }
        impl_->cnd.push_back(std::move(m));
    }
}

ReceivedPowerAnalyzer::~ReceivedPowerAnalyzer() = default;
ReceivedPowerAnalyzer::ReceivedPowerAnalyzer(ReceivedPowerAnalyzer&&) noexcept = default;
ReceivedPowerAnalyzer& ReceivedPowerAnalyzer::operator=(ReceivedPowerAnalyzer&&) noexcept =
    default;

// Per UE, the AP indices carrying nonzero weight (zero rows/entries of the
// allocation contribute nothing and are skipped everywhere).
static std::vector<std::vector<int>> active_aps(const Eigen::MatrixXd& w) {
    std::vector<std::vector<int>> act(w.rows());
    for (int i = 0; i < w.rows(); ++i)
        for (int l = 0; l < w.cols(); ++l)
            if (w(i, l) != 0.0) act[i].push_back(l);
    return act;
}

double ReceivedPowerAnalyzer::mean(const Eigen::MatrixXd& Omega) const {
    const auto& a = *impl_;
    const auto v = a.view(Omega);
    const auto act = active_aps(v.w);
    cd ei = 0.0;
    for (int i = 0; i < a.K; ++i) {
        for (int l1 : act[i]) {
            for (int l2 : act[i]) {
                const cd m = a.grouped({{l1, {i, true}}, {l2, {i, false}}}, 0, 0);
                ei += v.w(i, l1) * v.w(i, l2) * m;
            }
        }
    }
    for (int l = 0; l < a.L; ++l)
        if (v.trace_c[l] != 0.0) ei += v.trace_c[l] * a.bm(l, 1, {});
    return ei.real();
}

double ReceivedPowerAnalyzer::variance(const Eigen::MatrixXd& Omega) const {
    const auto& a = *impl_;
    const int K = a.K, L = a.L;
    const auto v = a.view(Omega);

    std::vector<cd> eq(L), eq2(L);
    for (int l = 0; l < L; ++l) {
        eq[l] = a.bm(l, 1, {});
        eq2[l] = a.bm(l, 2, {});
    }

    const auto act = active_aps(v.w);
    cd ei = 0.0;
    for (int i = 0; i < K; ++i) {
        for (int l1 : act[i]) {
            for (int l2 : act[i]) {
                ei += v.w(i, l1) * v.w(i, l2) *
                      a.grouped({{l1, {i, true}}, {l2, {i, false}}}, 0, 0);
            }
        }
    }
    for (int l = 0; l < L; ++l) ei += v.trace_c[l] * eq[l];

    cd ei2 = 0.0;
    // tr(C_l C_l') Q_l Q_l' and T_l T_l' Q_l Q_l' pieces
    for (int l = 0; l < L; ++l) {
        for (int lp = 0; lp < L; ++lp) {
            const cd eqq = (l == lp) ? eq2[l] : eq[l] * eq[lp];
            const double tau = v.cmat[l].cwiseProduct(v.cmat[lp].transpose()).sum();
            ei2 += (tau + v.trace_c[l] * v.trace_c[lp]) * eqq;
        }
    }
    // 2 sum_l Q_l mu^H C_l mu
    for (int l = 0; l < L; ++l) {
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) {
                const double clij = v.cmat[l](i, j);
                if (clij == 0.0) continue;
                for (int l1 : act[i]) {
                    for (int l2 : act[j]) {
                        ei2 += 2.0 * clij * v.w(i, l1) * v.w(j, l2) *
                               a.grouped({{l1, {i, true}}, {l2, {j, false}}}, l, 1);
                    }
                }
            }
        }
    }
    // ||mu||^4
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            for (int l1 : act[i]) {
                for (int l2 : act[i]) {
                    for (int l3 : act[j]) {
                        for (int l4 : act[j]) {
                            ei2 += v.w(i, l1) * v.w(i, l2) * v.w(j, l3) * v.w(j, l4) *
                                   a.grouped({{l1, {i, true}},
                                              {l2, {i, false}},
                                              {l3, {j, true}},
                                              {l4, {j, false}}},
                                             0, 0);
                        }
                    }
                }
            }
        }
    }
    // 2 ||mu||^2 sum_l Q_l T_l
    for (int i = 0; i < K; ++i) {
        for (int l = 0; l < L; ++l) {
            if (v.trace_c[l] == 0.0) continue;
            for (int l1 : act[i]) {
                for (int l2 : act[i]) {
                    ei2 += 2.0 * v.trace_c[l] * v.w(i, l1) * v.w(i, l2) *
                           a.grouped({{l1, {i, true}}, {l2, {i, false}}}, l, 1);
                }
            }
        }
    }
    return (ei2 - ei * ei).real();
}

}  // namespace cfwet
