#pragma once

// Scalar building blocks shared with the vector variants for edge handling.

#include <complex>
#include <cstddef>

namespace penkin::simd::detail {

double stencil_point(const double* coeffs, std::ptrdiff_t n_coeffs, std::ptrdiff_t base,
                     const double* w);

bool pole_is_near(double wr, double wi, double dv);

// Adds term i of pole_sum (without the trailing dv) to the accumulators.
void pole_term(const double* d, std::size_t i, double v0, double dv, std::complex<double> c,
               std::complex<double> rot, double& acc_r, double& acc_i);

void fourier_sum_scalar(const double* values, std::size_t n, double v0, double dv,
                        const double* xi, std::size_t m, std::complex<double>* out);

}  // namespace penkin::simd::detail
