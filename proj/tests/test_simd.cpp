#include <doctest.h>

#include <complex>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include "penkin/simd/kernels.hpp"

using namespace penkin::simd;
using cplx = std::complex<double>;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <class T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

}  // namespace

TEST_SUITE("simd") {
  TEST_CASE("dispatch picks a table") {
    const auto& k = kernels();
    CHECK(k.name != nullptr);
    CHECK(scalar_kernels().isa == Isa::scalar);
    if (avx2_kernels() == nullptr) MESSAGE("AVX2 variant unavailable; equivalence cases are skipped");
  }

  TEST_CASE("avx2 matches scalar bitwise") {
    const KernelTable* v = avx2_kernels();
    if (v == nullptr) return;
    const KernelTable& s = scalar_kernels();

    for (std::size_t n : {1, 3, 4, 7, 64, 255, 1024}) {
      CAPTURE(n);
      const auto x = random_vec(n, 11 + n);

      SUBCASE("sum") {
        const double a = s.sum(x.data(), n), b = v->sum(x.data(), n);
        CHECK(std::memcmp(&a, &b, sizeof a) == 0);
      }
      SUBCASE("fourier_sum") {
        const std::vector<double> xi = {0.0, 0.3, -1.7, 5.0, 12.5};
        std::vector<cplx> a(xi.size()), b(xi.size());
        s.fourier_sum(x.data(), n, -3.0, 0.05, xi.data(), xi.size(), a.data());
        v->fourier_sum(x.data(), n, -3.0, 0.05, xi.data(), xi.size(), b.data());
        CHECK(same_bits(a, b));
      }
      SUBCASE("complex_mul") {
        const auto re = random_vec(2 * n, 3 * n), ph = random_vec(2 * n, 5 * n);
        std::vector<cplx> d(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
          d[i] = {re[2 * i], re[2 * i + 1]};
          p[i] = {ph[2 * i], ph[2 * i + 1]};
        }
        auto d2 = d;
        s.complex_mul(d.data(), p.data(), n);
        v->complex_mul(d2.data(), p.data(), n);
        CHECK(same_bits(d, d2));
      }
      SUBCASE("stencil4") {
        const double w[4] = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 0.0};
        for (std::ptrdiff_t off : {-5, -1, 0, 2, 7}) {
          std::vector<double> a(n), b(n);
          s.stencil4(x.data(), static_cast<std::ptrdiff_t>(n), off, w, a.data(), n);
          v->stencil4(x.data(), static_cast<std::ptrdiff_t>(n), off, w, b.data(), n);
          CHECK(same_bits(a, b));
        }
      }
      SUBCASE("pole_sum") {
        const double v0 = -4.0, dv = 8.0 / static_cast<double>(n);
        for (cplx c : {cplx(0.3, 0.2), cplx(-1.1, 1e-3), cplx(v0 + 2.0 * dv, 0.0), cplx(2.0, 5.0)}) {
          const cplx rot = std::polar(std::exp(-std::numbers::pi * c.imag() / dv), std::numbers::pi * (c.real() - v0) / dv);
          const cplx a = s.pole_sum(x.data(), n, v0, dv, c, rot);
          const cplx b = v->pole_sum(x.data(), n, v0, dv, c, rot);
          CHECK(std::memcmp(&a, &b, sizeof a) == 0);
        }
      }
    }
  }

  TEST_CASE("scalar fourier_sum against direct exponentials") {
    const auto x = random_vec(40, 99);
    const double xi = 0.7, v0 = -2.0, dv = 0.1;
    cplx out;
    scalar_kernels().fourier_sum(x.data(), x.size(), v0, dv, &xi, 1, &out);
    cplx ref = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ref += x[i] * std::polar(1.0, -xi * (v0 + double(i) * dv));
    CHECK(std::abs(out - ref) <= 1e-13);
  }

  TEST_CASE("pole_sum against quadrature of the sinc interpolant") {
    // One sample: dv * d * (rot * (-1)^0 - 1) / (c - v0) is the integral of
    // d * sinc((v - v0) / dv) / (v - c).
    const double d = 1.0, v0 = 0.0, dv = 1.0;
    const cplx c(0.4, 0.8);
    const cplx rot = std::polar(std::exp(-std::numbers::pi * c.imag() / dv), std::numbers::pi * (c.real() - v0) / dv);
    const cplx got = scalar_kernels().pole_sum(&d, 1, v0, dv, c, rot);
    cplx ref = 0.0;
    const double h = 1e-3, L = 4000.0;
    for (double v = -L; v < L; v += h) {
      const double t = v + 0.5 * h;
      const double sinc = std::abs(t) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
      ref += h * sinc / (t - c);
    }
    CHECK(std::abs(got - ref) <= 2e-3);
  }
}
