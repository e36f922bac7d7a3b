#include "penkin/core/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "penkin/core/fft.hpp"
#include "penkin/core/spline.hpp"
#include "penkin/error.hpp"
#include "penkin/simd/kernels.hpp"

namespace penkin {

SpatialField density(const PhaseField& f) {
  const auto& k = simd::kernels();
  const std::size_t nx = f.n_x();
  const double dv = f.grid_v().dv();
  std::vector<double> rho(nx);
#pragma omp parallel for schedule(static)
  for (std::size_t j = 0; j < nx; ++j) {
    auto r = f.row(j);
    rho[j] = dv * k.sum(r.data(), r.size());
  }
  return SpatialField(f.grid_x(), std::move(rho));
}

double mass(const PhaseField& f) {
  auto rho = density(f);
  return f.grid_x().dx() * simd::kernels().sum(rho.values().data(), rho.size());
}

std::complex<double> fourier_v(const VelocityProfile& p, double xi) {
  const double x[1] = {xi};
  return fourier_v(p, x)[0];
}

std::vector<std::complex<double>> fourier_v(const VelocityProfile& p, std::span<const double> xi) {
  for (double x : xi) {
    if (!std::isfinite(x)) throw InvalidArgument("fourier_v needs a finite frequency");
  }
  std::vector<std::complex<double>> out(xi.size());
  const auto& g = p.grid();
  simd::kernels().fourier_sum(p.values().data(), p.size(), g.first(), g.dv(), xi.data(), xi.size(),
                              out.data());
  const double scale = g.dv() / (2.0 * std::numbers::pi);
  for (auto& c : out) c *= scale;
  return out;
}

double sobolev_norm_x(const SpatialField& g, double s) {
  if (!(s >= 0.0)) throw InvalidArgument("Sobolev index must be non-negative");
  const auto coeffs = fourier_coefficients(g.values());
  const auto& grid = g.grid();
  const std::size_t n = grid.size();
  double acc = 0.0;
  for (std::size_t q = 0; q < coeffs.size(); ++q) {
    const double k = grid.wavenumber(q);
    // Interior modes stand for both +k and -k.
    const double mult = (q == 0 || q == n / 2) ? 1.0 : 2.0;
    acc += mult * std::pow(1.0 + k * k, s) * std::norm(coeffs[q]);
  }
  return std::sqrt(acc);
}

double rms_norm(const SpatialField& g) {
  double acc = 0.0;
  for (double x : g.values()) acc += x * x;
  return std::sqrt(acc / static_cast<double>(g.size()));
}

PhaseField shift_interpolate_v(const PhaseField& f, const SpatialField& displacement) {
  if (!(displacement.grid() == f.grid_x())) throw GridMismatch("displacement grid differs from field grid");
  const auto& gv = f.grid_v();
  const double limit = gv.v_max() / 4.0;
  for (double d : displacement.values()) {
    if (!(std::abs(d) <= limit)) {
      throw DisplacementTooLarge("|displacement| = " + std::to_string(std::abs(d)) + " exceeds v_max/4 = " +
                                 std::to_string(limit));
    }
  }
  const std::size_t nx = f.n_x(), nv = f.n_v();
  PhaseField out(f.grid_x(), gv);
  const CubicSpline spline(nv);
  const double dv = gv.dv();
#pragma omp parallel
  {
    std::vector<double> coeffs(spline.n_coeffs());
#pragma omp for schedule(static)
    for (std::size_t j = 0; j < nx; ++j) {
      const double d = displacement[j];
      if (d == 0.0) {
        std::copy(f.row(j).begin(), f.row(j).end(), out.row(j).begin());
        continue;
      }
      spline.coefficients(f.row(j), coeffs);
      spline.evaluate_shifted(coeffs, -d / dv, out.row(j));
    }
  }
  return out;
}

double l2_norm(const PhaseField& f) {
  double acc = 0.0;
  for (double x : f.data()) acc += x * x;
  return std::sqrt(acc * f.grid_x().dx() * f.grid_v().dv());
}

double linf_norm(const PhaseField& f) {
  double m = 0.0;
  for (double x : f.data()) {
    if (std::isnan(x)) return x;  // max() would drop it
    m = std::max(m, std::abs(x));
  }
  return m;
}

double min_value(const PhaseField& f) {
  auto d = f.data();
  return *std::min_element(d.begin(), d.end());
}

VelocityProfile derivative_v(const VelocityProfile& p) {
  const std::size_t n = p.size();
  const double h = p.grid().dv();
  auto v = p.values();
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
  }
  // One-sided and off-centre fourth-order stencils at the ends.
  d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
  d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
  d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) / (12.0 * h);
  d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / (12.0 * h);
  return VelocityProfile(p.grid(), std::move(d));
}

}  // namespace penkin
