#pragma once

#include <complex>
#include <span>
#include <vector>

#include "penkin/core/field.hpp"

namespace penkin {

// rho_j = dv * sum_i f(x_j, v_i), summed in a fixed order.
SpatialField density(const PhaseField& f);

// dx * sum_j rho_j with rho from density(f).
double mass(const PhaseField& f);

// (2 pi)^{-1} dv sum_i p(v_i) exp(-i xi v_i).
std::complex<double> fourier_v(const VelocityProfile& p, double xi);

// Batched form of fourier_v over many frequencies.
std::vector<std::complex<double>> fourier_v(const VelocityProfile& p, std::span<const double> xi);

// (sum_k (1 + k^2)^s |g_k|^2)^{1/2} over the full discrete spectrum, with
// coefficients normalised so that a constant c has g_0 = c.
double sobolev_norm_x(const SpatialField& g, double s);

// Root-mean-square norm (sum_j g_j^2 / n)^{1/2}; equals sobolev_norm_x(g, 0).
double rms_norm(const SpatialField& g);

// out(x_j, v_i) = f(x_j, v_i - displacement(x_j)), cubic spline in v with
// zero extension. Throws DisplacementTooLarge if |displacement| > v_max / 4.
PhaseField shift_interpolate_v(const PhaseField& f, const SpatialField& displacement);

// sqrt(dx dv sum f^2), max |f| and min f over the grid.
double l2_norm(const PhaseField& f);
double linf_norm(const PhaseField& f);
double min_value(const PhaseField& f);

// 4th-order centred differences of p, one-sided 4th-order stencils at the two
// nodes nearest each end.
VelocityProfile derivative_v(const VelocityProfile& p);

}  // namespace penkin
