#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "penkin/core/field.hpp"
#include "penkin/penrose.hpp"

namespace penkin {

// F(t_i, x_j), t_i = i * dt for i < n_t, stored time-major.
class SpaceTimeField {
 public:
  SpaceTimeField(std::size_t n_t, double dt, GridX gx);
  SpaceTimeField(std::size_t n_t, double dt, GridX gx, std::vector<double> values);

  std::size_t n_t() const { return n_t_; }
  double dt() const { return dt_; }
  double time(std::size_t i) const { return static_cast<double>(i) * dt_; }
  const GridX& grid_x() const { return gx_; }
  std::size_t n_x() const { return gx_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * gx_.size() + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * gx_.size() + j]; }
  std::span<const double> slice(std::size_t i) const { return {data_.data() + i * gx_.size(), gx_.size()}; }
  std::span<double> slice(std::size_t i) { return {data_.data() + i * gx_.size(), gx_.size()}; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool same_grid(const SpaceTimeField& o) const { return n_t_ == o.n_t_ && dt_ == o.dt_ && gx_ == o.gx_; }

 private:
  std::size_t n_t_;
  double dt_;
  GridX gx_;
  std::vector<double> data_;
};

// sqrt(dt dx sum F^2).
double l2_norm(const SpaceTimeField& F);
// dt dx sum U W.
double inner(const SpaceTimeField& U, const SpaceTimeField& W);

// Kernel G of the averaging operator. Either a single phase-space slice g(x, v)
// used at every (t, s), or a lower-triangular table of slices G(t_i, s_j).
class KernelFunction {
 public:
  static KernelFunction separable(PhaseField g);
  // slices[i * n_t + j] for j <= i; entries above the diagonal are ignored.
  static KernelFunction table(std::size_t n_t, double dt, std::vector<PhaseField> slices);
  // v-gradient of a distribution field.
  static KernelFunction from_distribution(const PhaseField& f0);

  bool is_separable() const { return table_n_t_ == 0; }
  const PhaseField& slice(std::size_t i, std::size_t j) const;
  const GridX& grid_x() const { return slices_.front().grid_x(); }
  const GridV& grid_v() const { return slices_.front().grid_v(); }
  std::size_t table_n_t() const { return table_n_t_; }
  double table_dt() const { return table_dt_; }

  KernelFunction scaled(double c) const;

 private:
  std::vector<PhaseField> slices_;
  std::size_t table_n_t_ = 0;
  double table_dt_ = 0.0;
};

// K_G(F)(t, x) = int_0^t int (d_x F)(s, x - (t - s) v) G(t, s, x, v) dv ds:
// spectral x-derivative and shifts, rectangle rule in v, trapezoid in s.
SpaceTimeField apply_K(const KernelFunction& G, const SpaceTimeField& F);
// Adjoint for the inner product above.
SpaceTimeField apply_K_adjoint(const KernelFunction& G, const SpaceTimeField& W);

// Discrete (Hhyp)-type norm: x-coefficients, v-transform on an n_v-point
// grid in [-pi/dv, pi/dv], sup over (s, xi), weighted l2 over k, sup over t.
double norm_G(const KernelFunction& G, double s1, double s2, double T);
// Rigorous upper bound for norm_G through W^{n,1} norms in v, n = ceil(s1).
double norm_G_sobolev_bound(const KernelFunction& G, double s1, double s2, double T);

struct NormEstimate {
  double sigma_max = 0.0;
  int iterations = 0;
  double last_change = 0.0;
};

// Largest singular value of the discrete K_G on n_t steps over [0, T).
// Lanczos on K*K from a fixed seed, 50 to 200 steps.
NormEstimate kernel_norm_estimate(const KernelFunction& G, std::size_t n_t, double T);

// (Op_a^gamma u)(t, x_j) with u zero-padded 2x in time. The symbol callback
// receives the x-node index and (gamma, tau, k). Returns the real part.
using SymbolFn = std::function<std::complex<double>(std::size_t j, double gamma, double tau, double k)>;
SpaceTimeField quantize_symbol(const SymbolFn& a, double gamma, const SpaceTimeField& u);

// Symbol of e^{-gamma t} K_{d_v f0} e^{gamma t}: 2 pi * symbol_a(f0(x_j, .)).
SymbolFn kernel_symbol(const PhaseField& f0);

struct Equivalence {
  double discrepancy = 0.0;
  SpaceTimeField lhs;
  SpaceTimeField rhs;
};

// ||LHS - RHS|| / ||RHS|| for e^{-gamma t} K_{d_v f0}(e^{gamma t} h) against
// Op^gamma of the kernel symbol.
Equivalence kernel_symbol_equivalence(const PhaseField& f0, double gamma, const SpaceTimeField& h);

}  // namespace penkin
