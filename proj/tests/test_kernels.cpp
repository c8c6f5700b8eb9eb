#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "cfwet/kernels.hpp"

namespace k = cfwet::kernels;
using cd = std::complex<double>;

namespace {

std::vector<cd> random_vec(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<cd> v(n);
    for (auto& x : v) x = cd(g(rng), g(rng));
    return v;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward accumulation") {
    std::mt19937_64 rng(7);
    const auto a = random_vec(37, rng), b = random_vec(37, rng);
    cd dot = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * std::conj(b[i]);
        s2 += std::norm(a[i]);
    }
    CHECK(std::abs(k::cdot_conj_scalar(a.data(), b.data(), a.size()) - dot) <=
          1e-12 * std::abs(dot));
    CHECK(k::sum_abs2_scalar(a.data(), a.size()) == doctest::Approx(s2).epsilon(1e-12));
}

TEST_CASE("dispatched implementation is equivalent to scalar") {
    std::mt19937_64 rng(11);
    const k::Impl original = k::active_impl();
    for (std::size_t n : {0, 1, 2, 3, 4, 7, 8, 9, 31, 64, 101}) {
        const auto a = random_vec(n, rng), b = random_vec(n, rng);
        const cd ref = k::cdot_conj_scalar(a.data(), b.data(), n);
        const double ref2 = k::sum_abs2_scalar(a.data(), n);
        for (k::Impl impl : {k::Impl::scalar, k::Impl::avx2}) {
            k::force_impl(impl);
            const cd got = k::cdot_conj(a.data(), b.data(), n);
            CHECK(std::abs(got - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
            CHECK(k::sum_abs2(a.data(), n) ==
                  doctest::Approx(ref2).epsilon(1e-12));
        }
    }
    k::force_impl(original);
}

TEST_CASE("forcing an unavailable implementation is a no-op downgrade") {
    const k::Impl original = k::active_impl();
    const k::Impl got = k::force_impl(k::Impl::avx2);
    // Either AVX2 is available and now active, or the scalar path stays.
    CHECK(got == k::active_impl());
    k::force_impl(original);
    CHECK(k::active_impl() == original);
}

TEST_CASE("empty and trivial inputs") {
    const cd one(1.0, 2.0);
    CHECK(k::cdot_conj(nullptr, nullptr, 0) == cd(0.0, 0.0));
    CHECK(k::sum_abs2(nullptr, 0) == 0.0);
    const cd self = k::cdot_conj(&one, &one, 1);
    CHECK(self.real() == doctest::Approx(std::norm(one)));
    CHECK(self.imag() == doctest::Approx(0.0));
}
