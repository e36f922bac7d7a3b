#include "penkin/core/spline.hpp"

#include <cmath>

#include "penkin/error.hpp"
#include "penkin/simd/kernels.hpp"

namespace penkin {

CubicSpline::CubicSpline(std::size_t n, std::size_t pad) : n_(n), pad_(pad) {
  // Interpolation conditions c[m-1] + 4 c[m] + c[m+1] = 6 d[m], c = 0 beyond
  // the padded range.
  const std::size_t N = n_coeffs();
  cprime_.resize(N);
  inv_piv_.resize(N);
  double prev = 0.0;
  for (std::size_t m = 0; m < N; ++m) {
    const double piv = 4.0 - prev;
    inv_piv_[m] = 1.0 / piv;
    cprime_[m] = inv_piv_[m];
    prev = cprime_[m];
  }
}

void CubicSpline::coefficients(std::span<const double> row, std::span<double> coeffs) const {
  if (row.size() != n_ || coeffs.size() != n_coeffs()) throw GridMismatch("spline buffer sizes");
  const std::size_t N = n_coeffs();
  double prev = 0.0;
  for (std::size_t m = 0; m < N; ++m) {
    const double rhs = (m >= pad_ && m < pad_ + n_) ? 6.0 * row[m - pad_] : 0.0;
    prev = (rhs - prev) * inv_piv_[m];
    coeffs[m] = prev;
  }
  for (std::size_t m = N - 1; m-- > 0;) coeffs[m] -= cprime_[m] * coeffs[m + 1];
}

void CubicSpline::evaluate_shifted(std::span<const double> coeffs, double q,
                                   std::span<double> out) const {
  if (coeffs.size() != n_coeffs() || out.size() != n_) throw GridMismatch("spline buffer sizes");
  const double fl = std::floor(q);
  const double t = q - fl;
  const double t2 = t * t, t3 = t2 * t;
  const double u = 1.0 - t;
  const double w[4] = {u * u * u / 6.0, (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
                       (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0, t3 / 6.0};
  const auto offset = static_cast<std::ptrdiff_t>(fl) - 1 + static_cast<std::ptrdiff_t>(pad_);
  simd::kernels().stencil4(coeffs.data(), static_cast<std::ptrdiff_t>(coeffs.size()), offset, w,
                           out.data(), out.size());
}

}  // namespace penkin
