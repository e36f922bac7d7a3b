#pragma once

#include <complex>
#include <map>
#include <vector>

#include <json.hpp>

#include "penkin/core/field.hpp"

namespace penkin {

struct FreqPoint {
  double gamma = 1.0;
  double tau = 0.0;
  double eta = 1.0;
};

enum class PenroseMode { s_form, v_form };

// Quadrature controls for the s-integral.
struct SQuad {
  double tail_tol = 1e-10;  // certified bound on the dropped tail
  double conv_tol = 1e-8;   // doubling n_s must change the result by less
  std::size_t n_s = 32;     // initial number of intervals
  std::size_t max_n_s = std::size_t{1} << 16;
};

struct ScanConfig {
  int n_sphere = 32;
  double sigma_max = 64.0;
  std::vector<double> sigma_values;  // empty: {0} U {sigma_max 2^-j}, 25 points
  SQuad s_quad;
  std::vector<double> c0_values = {0.05, 0.1, 0.2, 0.5};

  void validate() const;
  std::vector<double> sigmas() const;
};

struct PenroseReport {
  double margin = 1.0;
  FreqPoint argmin;
  double argmin_sigma = 0.0;
  std::map<double, bool> stable_at;
  ScanConfig resolution;
  bool rough = false;  // derivative spectrum did not decay; v_form used throughout

  nlohmann::json to_json() const;
};

// Sampled profile prepared for repeated evaluation: derivative, moment tables
// for the endpoint corrections, and the spectral tail bound.
class PenroseEngine {
 public:
  explicit PenroseEngine(const VelocityProfile& p, SQuad quad = {});

  // a(gamma, tau, eta); P = 1 - a / (1 + eta^2).
  std::complex<double> symbol(const FreqPoint& z, PenroseMode mode) const;
  std::complex<double> value(const FreqPoint& z, PenroseMode mode) const;

  // Frequency beyond which the transform of p' carries less than tail_tol.
  double xi_tail() const { return xi_tail_; }
  bool rough() const { return rough_; }
  const VelocityProfile& derivative() const { return dp_; }

 private:
  std::complex<double> symbol_s(const FreqPoint& z) const;
  std::complex<double> symbol_v(const FreqPoint& z) const;
  // m-th xi-derivative of (2 pi)^{-1} dv sum p'_i exp(-i xi v_i).
  std::complex<double> transform_derivative(int m, double xi) const;

  VelocityProfile dp_;
  SQuad quad_;
  std::vector<std::vector<double>> moments_;  // p'_i v_i^m
  double xi_tail_ = 0.0;
  double sup_transform_ = 0.0;
  bool rough_ = false;
  bool zero_ = false;
};

std::complex<double> penrose_value(const VelocityProfile& p, const FreqPoint& z, PenroseMode mode,
                                   const SQuad& quad = {});
std::complex<double> symbol_a(const VelocityProfile& p, const FreqPoint& z,
                              PenroseMode mode = PenroseMode::s_form, const SQuad& quad = {});

PenroseReport penrose_margin(const VelocityProfile& p, const ScanConfig& cfg);
double penrose_margin_field(const PhaseField& f, const ScanConfig& cfg, std::size_t x_samples);

}  // namespace penkin
