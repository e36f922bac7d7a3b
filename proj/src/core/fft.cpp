#include "penkin/core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "penkin/error.hpp"

namespace penkin {
namespace {

struct PlanPair {
  fftw_plan fwd;
  fftw_plan bwd;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the whole process; FFTW planning is not thread-safe, so all
// creation goes through the mutex.
PlanPair real_plans(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(plan_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_1d(static_cast<int>(n), r, c, flags),
             fftw_plan_dft_c2r_1d(static_cast<int>(n), c, r, flags)};
  fftw_free(r);
  fftw_free(c);
  if (!p.fwd || !p.bwd) throw InvalidArgument("FFTW could not plan a real transform");
  cache.emplace(n, p);
  return p;
}

PlanPair complex_plans(std::size_t n) {
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(plan_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  fftw_complex* a = fftw_alloc_complex(n);
  fftw_complex* b = fftw_alloc_complex(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD, flags),
             fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD, flags)};
  fftw_free(a);
  fftw_free(b);
  if (!p.fwd || !p.bwd) throw InvalidArgument("FFTW could not plan a complex transform");
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  auto p = real_plans(n);
  fwd_ = p.fwd;
  bwd_ = p.bwd;
}

void RealFft::forward(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void RealFft::backward(cplx* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex*>(in), out);
}

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  auto p = complex_plans(n);
  fwd_ = p.fwd;
  bwd_ = p.bwd;
}

void ComplexFft::forward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void ComplexFft::backward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(bwd_),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::vector<cplx> fourier_coefficients(std::span<const double> g) {
  const std::size_t n = g.size();
  RealFft fft(n);
  std::vector<cplx> out(n / 2 + 1);
  fft.forward(g.data(), out.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<double> synthesize(std::span<const cplx> coeffs, std::size_t n) {
  if (coeffs.size() != n / 2 + 1) throw GridMismatch("coefficient count does not match n/2 + 1");
  RealFft fft(n);
  std::vector<cplx> tmp(coeffs.begin(), coeffs.end());
  std::vector<double> out(n);
  fft.backward(tmp.data(), out.data());
  return out;
}

}  // namespace penkin
