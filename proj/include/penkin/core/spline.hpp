#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace penkin {

// Cubic B-spline interpolation on a uniform row with zero extension: the row
// is padded with `pad` zero nodes on each side before prefiltering, so the
// interpolant vanishes smoothly outside the sampled range.
class CubicSpline {
 public:
  explicit CubicSpline(std::size_t n, std::size_t pad = 24);

  std::size_t size() const { return n_; }
  std::size_t n_coeffs() const { return n_ + 2 * pad_; }

  // B-spline coefficients of `row` (size n) into `coeffs` (size n_coeffs()).
  void coefficients(std::span<const double> row, std::span<double> coeffs) const;

  // out[i] = S(i + q) where S interpolates the row in index units.
  void evaluate_shifted(std::span<const double> coeffs, double q, std::span<double> out) const;

 private:
  std::size_t n_;
  std::size_t pad_;
  std::vector<double> cprime_;  // Thomas forward-sweep factors
  std::vector<double> inv_piv_;
};

}  // namespace penkin
