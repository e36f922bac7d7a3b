#include "penkin/core/grid.hpp"

#include <cmath>
#include <string>

#include "penkin/error.hpp"

namespace penkin {

GridX::GridX(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("GridX needs an even n_x >= 2, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("GridX length must be positive");
}

double GridX::wavenumber(std::size_t q) const {
  const auto qi = static_cast<long long>(q);
  const auto n = static_cast<long long>(n_);
  const long long m = qi <= n / 2 ? qi : qi - n;
  return fundamental() * static_cast<double>(m);
}

GridV::GridV(std::size_t n, double v_max) : n_(n), v_max_(v_max) {
  if (n < 8) throw InvalidArgument("GridV needs n_v >= 8, got " + std::to_string(n));
  if (!(v_max > 0.0) || !std::isfinite(v_max)) throw InvalidArgument("GridV v_max must be positive");
}

}  // namespace penkin
