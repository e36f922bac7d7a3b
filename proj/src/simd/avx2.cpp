#include <immintrin.h>

#include <cmath>

#include "penkin/simd/kernels.hpp"
#include "simd/scalar_impl.hpp"

namespace penkin::simd {
namespace {

void fourier_sum_avx2(const double* values, std::size_t n, double v0, double dv, const double* xi,
                      std::size_t m, std::complex<double>* out) {
  std::size_t j = 0;
  if (n > 0) {
    for (; j + 4 <= m; j += 4) {
      alignas(32) double c[4], s[4], pc[4], ps[4];
      for (int l = 0; l < 4; ++l) {
        c[l] = std::cos(xi[j + l] * dv);
        s[l] = -std::sin(xi[j + l] * dv);
        pc[l] = std::cos(xi[j + l] * v0);
        ps[l] = -std::sin(xi[j + l] * v0);
      }
      const __m256d vc = _mm256_load_pd(c);
      const __m256d vs = _mm256_load_pd(s);
      __m256d sr = _mm256_set1_pd(values[n - 1]);
      __m256d si = _mm256_setzero_pd();
      for (std::size_t i = n - 1; i-- > 0;) {
        const __m256d tr = _mm256_sub_pd(_mm256_mul_pd(sr, vc), _mm256_mul_pd(si, vs));
        const __m256d ti = _mm256_add_pd(_mm256_mul_pd(sr, vs), _mm256_mul_pd(si, vc));
        sr = _mm256_add_pd(tr, _mm256_set1_pd(values[i]));
        si = ti;
      }
      const __m256d vpc = _mm256_load_pd(pc);
      const __m256d vps = _mm256_load_pd(ps);
      const __m256d rr = _mm256_sub_pd(_mm256_mul_pd(sr, vpc), _mm256_mul_pd(si, vps));
      const __m256d ri = _mm256_add_pd(_mm256_mul_pd(sr, vps), _mm256_mul_pd(si, vpc));
      alignas(32) double br[4], bi[4];
      _mm256_store_pd(br, rr);
      _mm256_store_pd(bi, ri);
      for (int l = 0; l < 4; ++l) out[j + l] = {br[l], bi[l]};
    }
  }
  if (j < m) detail::fourier_sum_scalar(values, n, v0, dv, xi + j, m - j, out + j);
}

void stencil4_avx2(const double* coeffs, std::ptrdiff_t n_coeffs, std::ptrdiff_t offset,
                   const double* w, double* out, std::size_t n_out) {
  const auto n = static_cast<std::ptrdiff_t>(n_out);
  // Interior range where all four taps are in bounds: 0 <= i + offset and
  // i + offset + 3 < n_coeffs.
  std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, -offset);
  std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, n_coeffs - 3 - offset);
  if (hi < lo) hi = lo;
  lo = std::min(lo, n);
  hi = std::min(hi, n);
  for (std::ptrdiff_t i = 0; i < lo; ++i) out[i] = detail::stencil_point(coeffs, n_coeffs, i + offset, w);
  const __m256d w0 = _mm256_set1_pd(w[0]);
  const __m256d w1 = _mm256_set1_pd(w[1]);
  const __m256d w2 = _mm256_set1_pd(w[2]);
  const __m256d w3 = _mm256_set1_pd(w[3]);
  std::ptrdiff_t i = lo;
  for (; i + 4 <= hi; i += 4) {
    const double* p = coeffs + i + offset;
    __m256d acc = _mm256_setzero_pd();
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w0, _mm256_loadu_pd(p)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w1, _mm256_loadu_pd(p + 1)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w2, _mm256_loadu_pd(p + 2)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(w3, _mm256_loadu_pd(p + 3)));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) out[i] = detail::stencil_point(coeffs, n_coeffs, i + offset, w);
}

void complex_mul_avx2(std::complex<double>* data, const std::complex<double>* phase,
                      std::size_t n) {
  auto* a = reinterpret_cast<double*>(data);
  const auto* b = reinterpret_cast<const double*>(phase);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d va = _mm256_loadu_pd(a + 2 * k);
    const __m256d vb = _mm256_loadu_pd(b + 2 * k);
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d a_sw = _mm256_permute_pd(va, 0x5);
    const __m256d t1 = _mm256_mul_pd(va, b_re);
    const __m256d t2 = _mm256_mul_pd(a_sw, b_im);
    _mm256_storeu_pd(a + 2 * k, _mm256_addsub_pd(t1, t2));
  }
  for (; k < n; ++k) {
    const double ar = data[k].real(), ai = data[k].imag();
    const double br = phase[k].real(), bi = phase[k].imag();
    data[k] = {ar * br - ai * bi, ai * br + ar * bi};
  }
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double s[4];
  _mm256_store_pd(s, acc);
  for (std::size_t r = 0; i < n; ++i, ++r) s[r] += x[i];
  return (s[0] + s[1]) + (s[2] + s[3]);
}

std::complex<double> pole_sum_avx2(const double* d, std::size_t n, double v0, double dv,
                                   std::complex<double> c, std::complex<double> rot) {
  alignas(32) double ar[4] = {0.0, 0.0, 0.0, 0.0};
  alignas(32) double ai[4] = {0.0, 0.0, 0.0, 0.0};
  __m256d acc_r = _mm256_setzero_pd();
  __m256d acc_i = _mm256_setzero_pd();
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(sign, _mm256_set1_pd(rot.real())), one);
  const __m256d ni = _mm256_mul_pd(sign, _mm256_set1_pd(rot.imag()));
  const __m256d cr = _mm256_set1_pd(c.real());
  const __m256d wi = _mm256_set1_pd(c.imag());
  const __m256d wi2 = _mm256_mul_pd(wi, wi);
  const __m256d vv0 = _mm256_set1_pd(v0);
  const __m256d vdv = _mm256_set1_pd(dv);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double fi = static_cast<double>(i);
    const __m256d idx = _mm256_setr_pd(fi, fi + 1.0, fi + 2.0, fi + 3.0);
    const __m256d v = _mm256_add_pd(vv0, _mm256_mul_pd(idx, vdv));
    const __m256d wr = _mm256_sub_pd(cr, v);
    bool near = false;
    alignas(32) double wrs[4];
    _mm256_store_pd(wrs, wr);
    for (int l = 0; l < 4; ++l) near = near || detail::pole_is_near(wrs[l], c.imag(), dv);
    if (near) {
      _mm256_store_pd(ar, acc_r);
      _mm256_store_pd(ai, acc_i);
      for (int l = 0; l < 4; ++l) detail::pole_term(d, i + l, v0, dv, c, rot, ar[l], ai[l]);
      acc_r = _mm256_load_pd(ar);
      acc_i = _mm256_load_pd(ai);
      continue;
    }
    const __m256d den = _mm256_add_pd(_mm256_mul_pd(wr, wr), wi2);
    const __m256d qr = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(nr, wr), _mm256_mul_pd(ni, wi)), den);
    const __m256d qi = _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(ni, wr), _mm256_mul_pd(nr, wi)), den);
    const __m256d vd = _mm256_loadu_pd(d + i);
    acc_r = _mm256_add_pd(acc_r, _mm256_mul_pd(vd, qr));
    acc_i = _mm256_add_pd(acc_i, _mm256_mul_pd(vd, qi));
  }
  _mm256_store_pd(ar, acc_r);
  _mm256_store_pd(ai, acc_i);
  for (std::size_t r = 0; i < n; ++i, ++r) detail::pole_term(d, i, v0, dv, c, rot, ar[r], ai[r]);
  const double sr = (ar[0] + ar[1]) + (ar[2] + ar[3]);
  const double si = (ai[0] + ai[1]) + (ai[2] + ai[3]);
  return {sr * dv, si * dv};
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{Isa::avx2,        "avx2",           fourier_sum_avx2,
                                 stencil4_avx2,    complex_mul_avx2, sum_avx2,
                                 pole_sum_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace penkin::simd
