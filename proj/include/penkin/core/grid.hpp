#pragma once

#include <cstddef>
#include <numbers>

namespace penkin {

// Uniform periodic grid x_j = j * L / n on the torus [0, L).
class GridX {
 public:
  GridX(std::size_t n, double length = 2.0 * std::numbers::pi);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / static_cast<double>(n_); }
  double node(std::size_t j) const { return static_cast<double>(j) * dx(); }

  // Physical wavenumber of DFT index q (0 <= q < n), mapped to the
  // symmetric range (-n/2, n/2].
  double wavenumber(std::size_t q) const;
  // Number of non-negative modes in a real transform.
  std::size_t n_modes() const { return n_ / 2 + 1; }
  double fundamental() const { return 2.0 * std::numbers::pi / length_; }

  bool operator==(const GridX&) const = default;

 private:
  std::size_t n_;
  double length_;
};

// Cell-centred velocity grid on [-v_max, v_max]: v_i = -v_max + (i + 1/2) dv.
class GridV {
 public:
  GridV(std::size_t n, double v_max = 8.0);

  std::size_t size() const { return n_; }
  double v_max() const { return v_max_; }
  double dv() const { return 2.0 * v_max_ / static_cast<double>(n_); }
  double node(std::size_t i) const { return -v_max_ + (static_cast<double>(i) + 0.5) * dv(); }
  double first() const { return node(0); }

  bool operator==(const GridV&) const = default;

 private:
  std::size_t n_;
  double v_max_;
};

}  // namespace penkin
