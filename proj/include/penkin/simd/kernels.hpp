#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and
// an AVX2 variant; the active table is picked once at runtime from the CPU
// features. Variants perform the same floating-point operations in the same
// order (no FMA contraction), so their outputs are bitwise identical.

#include <complex>
#include <cstddef>

namespace penkin::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;

  // out[m] = sum_i values[i] * exp(-1i * xi[m] * (v0 + i * dv)) for i in [0, n).
  // Evaluated by Horner's rule in exp(-1i * xi[m] * dv).
  void (*fourier_sum)(const double* values, std::size_t n, double v0, double dv,
                      const double* xi, std::size_t m, std::complex<double>* out);

  // out[i] = sum_{t<4} w[t] * coeffs[i + offset + t]; coefficients outside
  // [0, n_coeffs) read as zero.
  void (*stencil4)(const double* coeffs, std::ptrdiff_t n_coeffs, std::ptrdiff_t offset,
                   const double* w, double* out, std::size_t n_out);

  // data[k] *= phase[k].
  void (*complex_mul)(std::complex<double>* data, const std::complex<double>* phase,
                      std::size_t n);

  // Sum with four interleaved partial sums, combined as (s0 + s1) + (s2 + s3).
  double (*sum)(const double* x, std::size_t n);

  // dv * sum_i d[i] * (rot * (-1)^i - 1) / (c - v_i), v_i = v0 + i * dv.
  // With rot = exp(1i*pi*(c - v0)/dv) each term is the exact integral of the
  // sinc cardinal function centred at v_i against 1/(v - c), Im c >= 0.
  std::complex<double> (*pole_sum)(const double* d, std::size_t n, double v0, double dv,
                                   std::complex<double> c, std::complex<double> rot);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* avx2_kernels();

// Best table for this machine. PENKIN_SIMD=scalar in the environment forces
// the scalar reference.
const KernelTable& kernels();

namespace detail {
// Shared by every variant for terms whose pole sits within a small fraction of
// a cell of c; the closed form cancels catastrophically there.
std::complex<double> pole_term_near(double d, double v, double dv, std::complex<double> c);
}  // namespace detail

}  // namespace penkin::simd
