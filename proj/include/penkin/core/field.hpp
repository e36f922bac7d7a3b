#pragma once

#include <span>
#include <vector>

#include "penkin/core/grid.hpp"

namespace penkin {

// Sampled velocity profile f(v_i) (or a derivative of one).
class VelocityProfile {
 public:
  VelocityProfile(GridV grid, std::vector<double> values);
  explicit VelocityProfile(GridV grid);  // zero profile

  const GridV& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  GridV grid_;
  std::vector<double> values_;
};

// Periodic-in-x field sampled on GridX.
class SpatialField {
 public:
  SpatialField(GridX grid, std::vector<double> values);
  explicit SpatialField(GridX grid, double value = 0.0);

  const GridX& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }
  std::size_t size() const { return values_.size(); }

 private:
  GridX grid_;
  std::vector<double> values_;
};

// Phase-space density f(x_j, v_i), stored row-major with x outer and v inner.
class PhaseField {
 public:
  PhaseField(GridX gx, GridV gv, std::vector<double> values);
  PhaseField(GridX gx, GridV gv);  // zero field

  const GridX& grid_x() const { return gx_; }
  const GridV& grid_v() const { return gv_; }
  std::size_t n_x() const { return gx_.size(); }
  std::size_t n_v() const { return gv_.size(); }

  double operator()(std::size_t j, std::size_t i) const { return data_[j * gv_.size() + i]; }
  double& operator()(std::size_t j, std::size_t i) { return data_[j * gv_.size() + i]; }
  std::span<const double> row(std::size_t j) const { return {data_.data() + j * gv_.size(), gv_.size()}; }
  std::span<double> row(std::size_t j) { return {data_.data() + j * gv_.size(), gv_.size()}; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  // Velocity profile at spatial node j.
  VelocityProfile column(std::size_t j) const;

  bool same_grid(const PhaseField& o) const { return gx_ == o.gx_ && gv_ == o.gv_; }

 private:
  GridX gx_;
  GridV gv_;
  std::vector<double> data_;
};

}  // namespace penkin
