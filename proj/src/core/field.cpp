#include "penkin/core/field.hpp"

#include <cmath>
#include <string>

#include "penkin/error.hpp"

namespace penkin {
namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

VelocityProfile::VelocityProfile(GridV grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatch("profile has " + std::to_string(values_.size()) + " values for n_v = " +
                       std::to_string(grid_.size()));
  }
  require_finite(values_, "VelocityProfile");
}

VelocityProfile::VelocityProfile(GridV grid) : grid_(grid), values_(grid.size(), 0.0) {}

SpatialField::SpatialField(GridX grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridMismatch("spatial field size does not match n_x");
  require_finite(values_, "SpatialField");
}

SpatialField::SpatialField(GridX grid, double value) : grid_(grid), values_(grid.size(), value) {}

PhaseField::PhaseField(GridX gx, GridV gv, std::vector<double> values)
    : gx_(gx), gv_(gv), data_(std::move(values)) {
  if (data_.size() != gx_.size() * gv_.size()) throw GridMismatch("phase field size does not match n_x * n_v");
  require_finite(data_, "PhaseField");
}

PhaseField::PhaseField(GridX gx, GridV gv) : gx_(gx), gv_(gv), data_(gx.size() * gv.size(), 0.0) {}

VelocityProfile PhaseField::column(std::size_t j) const {
  auto r = row(j);
  return VelocityProfile(gv_, std::vector<double>(r.begin(), r.end()));
}

}  // namespace penkin
