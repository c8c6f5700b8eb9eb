#include "cfwet/kernels.hpp"

namespace cfwet::kernels {

#ifdef CFWET_HAVE_AVX2
std::complex<double> cdot_conj_avx2(const std::complex<double>* a,
                                    const std::complex<double>* b, std::size_t n);
double sum_abs2_avx2(const std::complex<double>* x, std::size_t n);
#endif

namespace {

bool avx2_available() {
#ifdef CFWET_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Impl g_impl = avx2_available() ? Impl::avx2 : Impl::scalar;

}  // namespace

Impl active_impl() { return g_impl; }

Impl force_impl(Impl impl) {
    if (impl == Impl::avx2 && !avx2_available()) return g_impl;
    g_impl = impl;
    return g_impl;
}

std::complex<double> cdot_conj(const std::complex<double>* a,
                               const std::complex<double>* b, std::size_t n) {
#ifdef CFWET_HAVE_AVX2
    if (g_impl == Impl::avx2) return cdot_conj_avx2(a, b, n);
#endif
    return cdot_conj_scalar(a, b, n);
}

double sum_abs2(const std::complex<double>* x, std::size_t n) {
#ifdef CFWET_HAVE_AVX2
    if (g_impl == Impl::avx2) return sum_abs2_avx2(x, n);
#endif
    return sum_abs2_scalar(x, n);
}

}  // namespace cfwet::kernels
