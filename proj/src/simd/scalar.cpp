#include <cmath>
#include <numbers>

#include "penkin/simd/kernels.hpp"
#include "simd/scalar_impl.hpp"

namespace penkin::simd {

namespace detail {

std::complex<double> pole_term_near(double d, double v, double dv, std::complex<double> c) {
  // (exp(iz) - 1) / w with z = pi * w / dv, expanded to fifth order in z.
  const std::complex<double> w = c - v;
  const double k = std::numbers::pi / dv;
  const std::complex<double> z = k * w;
  const std::complex<double> I(0.0, 1.0);
  const std::complex<double> z2 = z * z;
  const std::complex<double> series =
      1.0 + I * z / 2.0 - z2 / 6.0 - I * z2 * z / 24.0 + z2 * z2 / 120.0;
  return d * k * I * series;
}

void fourier_sum_scalar(const double* values, std::size_t n, double v0, double dv,
                        const double* xi, std::size_t m, std::complex<double>* out) {
  for (std::size_t j = 0; j < m; ++j) {
    if (n == 0) {
      out[j] = 0.0;
      continue;
    }
    const double c = std::cos(xi[j] * dv);
    const double s = -std::sin(xi[j] * dv);
    double sr = values[n - 1];
    double si = 0.0;
    for (std::size_t i = n - 1; i-- > 0;) {
      const double tr = sr * c - si * s;
      const double ti = sr * s + si * c;
      sr = tr + values[i];
      si = ti;
    }
    const double pc = std::cos(xi[j] * v0);
    const double ps = -std::sin(xi[j] * v0);
    out[j] = {sr * pc - si * ps, sr * ps + si * pc};
  }
}

double stencil_point(const double* coeffs, std::ptrdiff_t n_coeffs, std::ptrdiff_t base,
                     const double* w) {
  double acc = 0.0;
  for (int t = 0; t < 4; ++t) {
    const std::ptrdiff_t idx = base + t;
    const double cv = (idx >= 0 && idx < n_coeffs) ? coeffs[idx] : 0.0;
    acc = acc + w[t] * cv;
  }
  return acc;
}

void stencil4_scalar(const double* coeffs, std::ptrdiff_t n_coeffs, std::ptrdiff_t offset,
                     const double* w, double* out, std::size_t n_out) {
  for (std::size_t i = 0; i < n_out; ++i) {
    out[i] = stencil_point(coeffs, n_coeffs, static_cast<std::ptrdiff_t>(i) + offset, w);
  }
}

void complex_mul_scalar(std::complex<double>* data, const std::complex<double>* phase,
                        std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = data[k].real(), ai = data[k].imag();
    const double br = phase[k].real(), bi = phase[k].imag();
    data[k] = {ar * br - ai * bi, ai * br + ar * bi};
  }
}

double sum_scalar(const double* x, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s[0] += x[i];
    s[1] += x[i + 1];
    s[2] += x[i + 2];
    s[3] += x[i + 3];
  }
  for (std::size_t r = 0; i < n; ++i, ++r) s[r] += x[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

bool pole_is_near(double wr, double wi, double dv) {
  const double lim = 1e-2 * dv / std::numbers::pi;
  return wr * wr + wi * wi < lim * lim;
}

void pole_term(const double* d, std::size_t i, double v0, double dv, std::complex<double> c,
               std::complex<double> rot, double& acc_r, double& acc_i) {
  const double v = v0 + static_cast<double>(i) * dv;
  const double wr = c.real() - v;
  const double wi = c.imag();
  if (pole_is_near(wr, wi, dv)) {
    const std::complex<double> t = pole_term_near(d[i], v, dv, c);
    acc_r += t.real();
    acc_i += t.imag();
    return;
  }
  const double sg = (i % 2 == 0) ? 1.0 : -1.0;
  const double nr = sg * rot.real() - 1.0;
  const double ni = sg * rot.imag();
  const double den = wr * wr + wi * wi;
  const double qr = (nr * wr + ni * wi) / den;
  const double qi = (ni * wr - nr * wi) / den;
  acc_r += d[i] * qr;
  acc_i += d[i] * qi;
}

std::complex<double> pole_sum_scalar(const double* d, std::size_t n, double v0, double dv,
                                     std::complex<double> c, std::complex<double> rot) {
  double ar[4] = {0.0, 0.0, 0.0, 0.0};
  double ai[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) pole_term(d, i, v0, dv, c, rot, ar[i % 4], ai[i % 4]);
  const double sr = (ar[0] + ar[1]) + (ar[2] + ar[3]);
  const double si = (ai[0] + ai[1]) + (ai[2] + ai[3]);
  return {sr * dv, si * dv};
}

}  // namespace detail

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar,
                                 "scalar",
                                 detail::fourier_sum_scalar,
                                 detail::stencil4_scalar,
                                 detail::complex_mul_scalar,
                                 detail::sum_scalar,
                                 detail::pole_sum_scalar};
  return table;
}

}  // namespace penkin::simd
