#pragma once

#include <complex>
#include <cstddef>

// Reduction kernels used in the Monte-Carlo hot loops. A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime when
// the CPU supports it. The two are equivalence-tested.
namespace cfwet::kernels {

enum class Impl { scalar, avx2 };

// Currently dispatched implementation.
Impl active_impl();

// Force an implementation (ignored if unavailable); returns the one in effect.
Impl force_impl(Impl impl);

// sum_n a[n] * conj(b[n])
std::complex<double> cdot_conj(const std::complex<double>* a,
                               const std::complex<double>* b, std::size_t n);

// sum_n |x[n]|^2
double sum_abs2(const std::complex<double>* x, std::size_t n);

// Reference implementations (always compiled).
std::complex<double> cdot_conj_scalar(const std::complex<double>* a,
                                      const std::complex<double>* b, std::size_t n);
double sum_abs2_scalar(const std::complex<double>* x, std::size_t n);

}  // namespace cfwet::kernels
