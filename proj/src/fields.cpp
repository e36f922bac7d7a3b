#include "penkin/fields.hpp"

#include <cmath>
#include <string>

#include "penkin/core/fft.hpp"
#include "penkin/error.hpp"

namespace penkin {

FieldMode FieldMode::vp(double eps) {
  FieldMode m{Kind::vp, eps};
  m.validate();
  return m;
}

void FieldMode::validate() const {
  if (kind == Kind::vp && !(epsilon > 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
}

std::string to_string(const FieldMode& m) {
  if (m.kind == FieldMode::Kind::vdb) return "vdb";
  return "vp(" + std::to_string(m.epsilon) + ")";
}

FieldSolution solve_field(const SpatialField& rho, const FieldMode& mode) {
  mode.validate();
  const auto& g = rho.grid();
  const std::size_t n = g.size();
  auto c = fourier_coefficients(rho.values());
  std::vector<cplx> e(c.size());
  const bool vp = mode.kind == FieldMode::Kind::vp;
  const double eps2 = mode.epsilon * mode.epsilon;
  for (std::size_t q = 0; q < c.size(); ++q) {
    const double k = g.wavenumber(q);
    if (q == 0) {
      if (vp) c[0] -= 1.0;
      e[0] = 0.0;
      continue;
    }
    if (vp) c[q] /= 1.0 + eps2 * k * k;
    // The Nyquist mode has no real derivative.
    e[q] = (q == n / 2) ? cplx(0.0) : cplx(0.0, -k) * c[q];
  }
  SpatialField V = vp ? SpatialField(g, synthesize(c, n)) : rho;
  return {std::move(V), SpatialField(g, synthesize(e, n)), mode};
}

double field_energy(const SpatialField& V, const FieldMode& mode) {
  mode.validate();
  const auto& g = V.grid();
  const std::size_t n = g.size();
  const auto c = fourier_coefficients(V.values());
  const double eps2 = mode.kind == FieldMode::Kind::vp ? mode.epsilon * mode.epsilon : 0.0;
  double acc = 0.0;
  for (std::size_t q = 0; q < c.size(); ++q) {
    const double k = g.wavenumber(q);
    const double mult = (q == 0 || q == n / 2) ? 1.0 : 2.0;
    acc += mult * (1.0 + eps2 * k * k) * std::norm(c[q]);
  }
  return 0.5 * g.length() * acc;
}

double field_energy(const FieldSolution& s, const FieldMode& mode) {
  if (!(s.mode == mode)) throw ModeMismatch("field was solved in mode " + to_string(s.mode) + ", not " + to_string(mode));
  return field_energy(s.V, mode);
}

}  // namespace penkin
