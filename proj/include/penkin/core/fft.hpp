#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace penkin {

using cplx = std::complex<double>;

// Thin handles over cached FFTW plans (FFTW_ESTIMATE, so plans and results are
// reproducible). execute() calls are thread-safe; any pointers are accepted.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  std::size_t size() const { return n_; }

  // Unnormalised forward transform: out[q] = sum_j in[j] exp(-2 pi i q j / n),
  // q in [0, n/2]. `in` is not modified.
  void forward(const double* in, cplx* out) const;
  // Unnormalised inverse: out[j] = sum_q in[q] exp(2 pi i q j / n) over the
  // Hermitian extension. `in` is overwritten.
  void backward(cplx* in, double* out) const;

 private:
  std::size_t n_;
  void* fwd_;
  void* bwd_;
};

class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  std::size_t size() const { return n_; }

  // out[q] = sum_j in[j] exp(-2 pi i q j / n)
  void forward(const cplx* in, cplx* out) const;
  // out[j] = sum_q in[q] exp(2 pi i q j / n)
  void backward(const cplx* in, cplx* out) const;

 private:
  std::size_t n_;
  void* fwd_;
  void* bwd_;
};

// Fourier coefficients normalised so that g(x_j) = sum_q c_q exp(i k_q x_j):
// the zero mode is the mean. Returns the n/2 + 1 non-negative modes.
std::vector<cplx> fourier_coefficients(std::span<const double> g);

// Inverse of fourier_coefficients.
std::vector<double> synthesize(std::span<const cplx> coeffs, std::size_t n);

}  // namespace penkin
