#include <immintrin.h>

#include "cfwet/kernels.hpp"

namespace cfwet::kernels {

std::complex<double> cdot_conj_avx2(const std::complex<double>* a,
                                    const std::complex<double>* b, std::size_t n);
double sum_abs2_avx2(const std::complex<double>* x, std::size_t n);

std::complex<double> cdot_conj_avx2(const std::complex<double>* a,
                                    const std::complex<double>* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    // imag = sum_i (ai*br - ar*bi): multiply a by swapped b, then apply
    // the sign pattern [-1, +1] per complex slot before accumulating.
    const __m256d sign = _mm256_set_pd(1.0, -1.0, 1.0, -1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        __m256d vbs = _mm256_permute_pd(vb, 0x5);  // swap re/im in each slot
        acc_im = _mm256_fmadd_pd(_mm256_mul_pd(va, vbs), sign, acc_im);
    }
    alignas(32) double tr[4], ti[4];
    _mm256_store_pd(tr, acc_re);
    _mm256_store_pd(ti, acc_im);
    double re = tr[0] + tr[1] + tr[2] + tr[3];
    double im = ti[0] + ti[1] + ti[2] + ti[3];
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
    }
    return {re, im};
}

double sum_abs2_avx2(const std::complex<double>* x, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(px + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    alignas(32) double t[4];
    _mm256_store_pd(t, acc);
    double s = t[0] + t[1] + t[2] + t[3];
    for (; i < n; ++i) {
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    }
    return s;
}

}  // namespace cfwet::kernels
