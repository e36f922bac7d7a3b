#include "penkin/penrose.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "penkin/core/ops.hpp"
#include "penkin/error.hpp"
#include "penkin/simd/kernels.hpp"

namespace penkin {
namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr int kMoments = 6;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct SpherePoint {
  double theta, phi;
  FreqPoint z;
};

SpherePoint sphere_point(double theta, double phi, bool on_boundary) {
  SpherePoint p{theta, phi, {}};
  p.z.gamma = on_boundary ? 0.0 : std::sin(theta) * std::sin(phi);
  p.z.tau = std::sin(theta) * std::cos(phi);
  p.z.eta = std::cos(theta);
  return p;
}

}  // namespace

void ScanConfig::validate() const {
  if (n_sphere < 16) throw InvalidArgument("n_sphere must be at least 16");
  if (!(sigma_max > 0.0)) throw InvalidArgument("sigma_max must be positive");
  for (double s : sigma_values) {
    if (!(s >= 0.0 && s <= sigma_max)) throw InvalidArgument("sigma_values must lie in [0, sigma_max]");
  }
  if (!std::is_sorted(sigma_values.begin(), sigma_values.end())) {
    throw InvalidArgument("sigma_values must be ascending");
  }
  if (!(s_quad.tail_tol > 0.0 && s_quad.conv_tol > 0.0) || s_quad.n_s < 2 || s_quad.max_n_s < s_quad.n_s) {
    throw InvalidArgument("bad s-quadrature settings");
  }
}

std::vector<double> ScanConfig::sigmas() const {
  if (!sigma_values.empty()) return sigma_values;
  std::vector<double> s{0.0};
  for (int j = 23; j >= 0; --j) s.push_back(std::ldexp(sigma_max, -j));
  return s;
}

nlohmann::json PenroseReport::to_json() const {
  nlohmann::json stable = nlohmann::json::object();
  for (const auto& [c0, ok] : stable_at) {
    nlohmann::json key = c0;
    stable[key.dump()] = ok;
  }
  return {{"margin", margin},
          {"argmin", {{"gamma", argmin.gamma}, {"tau", argmin.tau}, {"eta", argmin.eta}, {"sigma", argmin_sigma}}},
          {"stable_at", stable},
          {"rough", rough},
          {"resolution", {{"n_sphere", resolution.n_sphere}, {"sigma_max", resolution.sigma_max},
                          {"n_sigma", resolution.sigmas().size()}}}};
}

PenroseEngine::PenroseEngine(const VelocityProfile& p, SQuad quad) : dp_(derivative_v(p)), quad_(quad) {
  const auto& g = dp_.grid();
  const std::size_t n = dp_.size();
  moments_.assign(kMoments, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0;
    for (int m = 0; m < kMoments; ++m) {
      moments_[m][i] = dp_[i] * w;
      w *= g.node(i);
    }
  }
  // Spectral envelope of p' on [0, pi/dv]; the dropped tail of the s-integral
  // is bounded by the integral of |F p'| beyond xi_tail.
  const double band = pi / g.dv();
  const std::size_t ns = std::max<std::size_t>(1024, 4 * n);
  std::vector<double> xi(ns + 1);
  for (std::size_t k = 0; k <= ns; ++k) xi[k] = band * static_cast<double>(k) / static_cast<double>(ns);
  auto F = fourier_v(dp_, xi);
  std::vector<double> mag(ns + 1);
  for (std::size_t k = 0; k <= ns; ++k) mag[k] = std::abs(F[k]);
  sup_transform_ = *std::max_element(mag.begin(), mag.end());
  if (sup_transform_ == 0.0) {
    zero_ = true;
    return;
  }
  const double dxi = band / static_cast<double>(ns);
  double tail = 0.0;
  std::size_t cut = ns + 1;
  for (std::size_t k = ns + 1; k-- > 0;) {
    tail += mag[k] * dxi;
    if (2.0 * tail >= quad_.tail_tol) break;
    cut = k;
  }
  if (cut > ns) {
    xi_tail_ = band;
    rough_ = true;
  } else {
    xi_tail_ = std::min(band, xi[cut] + dxi);
  }
}

cplx PenroseEngine::transform_derivative(int m, double xi) const {
  const auto& g = dp_.grid();
  cplx out;
  simd::kernels().fourier_sum(moments_[m].data(), moments_[m].size(), g.first(), g.dv(), &xi, 1, &out);
  static const cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return out * minus_i_pow[m % 4] * (g.dv() / (2.0 * pi));
}

cplx PenroseEngine::symbol_s(const FreqPoint& z) const {
  if (!(z.gamma > 0.0)) throw InvalidFrequency("s_form needs gamma > 0");
  if (zero_) return 0.0;
  const auto& g = dp_.grid();
  const double ae = std::abs(z.eta);
  const double s_band = pi / (g.dv() * ae);
  const double s_tail = xi_tail_ / ae;
  const double s_decay = std::log(std::max(ae * sup_transform_ / (z.gamma * quad_.tail_tol), 1.0)) / z.gamma;
  const double S = std::min({s_band, s_tail, s_decay});
  if (!(S > 0.0)) return 0.0;

  const cplx lam(z.gamma, z.tau);
  const cplx ieta(0.0, z.eta);
  const auto& k = simd::kernels();
  const double scale = g.dv() / (2.0 * pi);
  auto integrand = [&](const std::vector<double>& s, std::vector<cplx>& out) {
    std::vector<double> xi(s.size());
    for (std::size_t m = 0; m < s.size(); ++m) xi[m] = z.eta * s[m];
    out.resize(s.size());
    k.fourier_sum(dp_.values().data(), dp_.size(), g.first(), g.dv(), xi.data(), xi.size(), out.data());
    for (std::size_t m = 0; m < s.size(); ++m) out[m] = std::exp(-lam * s[m]) * ieta * (out[m] * scale);
  };

  // Odd derivatives of the integrand at both ends for the Euler-Maclaurin
  // corrections (orders 1, 3, 5).
  auto deriv = [&](int m, double s) {
    cplx acc = 0.0;
    double eta_j = 1.0;
    for (int j = 0; j <= m; ++j) {
      acc += binom(m, j) * std::pow(-lam, m - j) * eta_j * transform_derivative(j, z.eta * s);
      eta_j *= z.eta;
    }
    return ieta * std::exp(-lam * s) * acc;
  };
  const cplx d1 = deriv(1, S) - deriv(1, 0.0);
  const cplx d3 = deriv(3, S) - deriv(3, 0.0);
  const cplx d5 = deriv(5, S) - deriv(5, 0.0);

  std::size_t n = quad_.n_s;
  std::vector<double> s(n + 1);
  for (std::size_t m = 0; m <= n; ++m) s[m] = S * static_cast<double>(m) / static_cast<double>(n);
  std::vector<cplx> vals;
  integrand(s, vals);
  cplx ends = 0.5 * (vals.front() + vals.back());
  cplx inner = 0.0;
  for (std::size_t m = 1; m < n; ++m) inner += vals[m];

  auto estimate = [&](std::size_t nn) {
    const double h = S / static_cast<double>(nn);
    const double h2 = h * h;
    return h * (ends + inner) - h2 / 12.0 * d1 + h2 * h2 / 720.0 * d3 - h2 * h2 * h2 / 30240.0 * d5;
  };

  cplx prev = estimate(n);
  while (true) {
    if (2 * n > quad_.max_n_s) {
      throw QuadratureNotConverged("s-integral did not settle by n_s = " + std::to_string(n) + " at (gamma, tau, eta) = (" +
                                   std::to_string(z.gamma) + ", " + std::to_string(z.tau) + ", " +
                                   std::to_string(z.eta) + ")");
    }
    std::vector<double> mid(n);
    for (std::size_t m = 0; m < n; ++m) mid[m] = S * (2.0 * static_cast<double>(m) + 1.0) / (2.0 * static_cast<double>(n));
    integrand(mid, vals);
    for (const auto& v : vals) inner += v;
    n *= 2;
    const cplx cur = estimate(n);
    if (std::abs(cur - prev) <= quad_.conv_tol) return cur;
    prev = cur;
  }
}

cplx PenroseEngine::symbol_v(const FreqPoint& z) const {
  if (zero_) return 0.0;
  if (z.eta < 0.0) return std::conj(symbol_v({z.gamma, -z.tau, -z.eta}));
  const auto& g = dp_.grid();
  const cplx c(-z.tau / z.eta, z.gamma / z.eta);
  const cplx rot = std::polar(std::exp(-pi * c.imag() / g.dv()), pi * (c.real() - g.first()) / g.dv());
  const cplx W = simd::kernels().pole_sum(dp_.values().data(), dp_.size(), g.first(), g.dv(), c, rot);
  return W / (2.0 * pi);
}

cplx PenroseEngine::symbol(const FreqPoint& z, PenroseMode mode) const {
  if (z.eta == 0.0 || !std::isfinite(z.eta)) throw InvalidFrequency("eta must be non-zero");
  if (!(z.gamma >= 0.0) || !std::isfinite(z.gamma) || !std::isfinite(z.tau)) {
    throw InvalidFrequency("need finite tau and gamma >= 0");
  }
  return mode == PenroseMode::s_form ? symbol_s(z) : symbol_v(z);
}

cplx PenroseEngine::value(const FreqPoint& z, PenroseMode mode) const {
  return 1.0 - symbol(z, mode) / (1.0 + z.eta * z.eta);
}

cplx penrose_value(const VelocityProfile& p, const FreqPoint& z, PenroseMode mode, const SQuad& quad) {
  return PenroseEngine(p, quad).value(z, mode);
}

cplx symbol_a(const VelocityProfile& p, const FreqPoint& z, PenroseMode mode, const SQuad& quad) {
  return PenroseEngine(p, quad).symbol(z, mode);
}

PenroseReport penrose_margin(const VelocityProfile& p, const ScanConfig& cfg) {
  cfg.validate();
  const PenroseEngine eng(p, cfg.s_quad);
  const auto sig = cfg.sigmas();
  const int nt = cfg.n_sphere, np = 2 * cfg.n_sphere + 1;
  const double dth = 0.5 * pi / nt, dph = pi / (np - 1);

  auto mode_for = [&](const FreqPoint& z) {
    return (z.gamma == 0.0 || eng.rough()) ? PenroseMode::v_form : PenroseMode::s_form;
  };

  // a at each sphere point; sigma only rescales the coupling.
  auto eval_all = [&](const std::vector<SpherePoint>& pts) {
    std::vector<cplx> a(pts.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t m = 0; m < pts.size(); ++m) {
      try {
        a[m] = eng.symbol(pts[m].z, mode_for(pts[m].z));
      } catch (...) {
#pragma omp critical(penrose_err)
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return a;
  };

  struct Best {
    double value = std::numeric_limits<double>::infinity();
    SpherePoint pt{};
    std::size_t i = 0, j = 0;
    double sigma = 0.0;
  } best;
  auto consider = [&](const std::vector<SpherePoint>& pts, const std::vector<cplx>& a, const std::vector<double>& ss,
                      std::size_t row_len) {
    for (std::size_t m = 0; m < pts.size(); ++m) {
      const double e2 = pts[m].z.eta * pts[m].z.eta;
      for (double s : ss) {
        const double v = std::abs(1.0 - a[m] / (1.0 + s * s * e2));
        if (v < best.value) {
          best.value = v;
          best.pt = pts[m];
          best.i = m / row_len;
          best.j = m % row_len;
          best.sigma = s;
        }
      }
    }
  };

  std::vector<SpherePoint> pts;
  pts.reserve(static_cast<std::size_t>(nt) * np);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) pts.push_back(sphere_point((i + 0.5) * dth, j * dph, j == 0 || j == np - 1));
  }
  consider(pts, eval_all(pts), sig, np);

  // One level of 4x subdivision around the coarse argmin.
  {
    const SpherePoint c = best.pt;
    std::vector<SpherePoint> fine;
    for (int a = -4; a <= 4; ++a) {
      const double th = c.theta + a * dth / 4.0;
      if (!(th > 0.0 && th < 0.5 * pi)) continue;
      for (int b = -4; b <= 4; ++b) {
        const double ph = c.phi + b * dph / 4.0;
        if (ph < -1e-14 || ph > pi + 1e-14) continue;
        const bool edge = std::abs(ph) < 1e-14 || std::abs(ph - pi) < 1e-14;
        fine.push_back(sphere_point(th, std::clamp(ph, 0.0, pi), edge));
      }
    }
    const auto it = std::find(sig.begin(), sig.end(), best.sigma);
    const std::size_t k = static_cast<std::size_t>(it - sig.begin());
    std::vector<double> fs;
    const double lo = k > 0 ? sig[k - 1] : sig[k];
    const double hi = k + 1 < sig.size() ? sig[k + 1] : sig[k];
    for (int q = 0; q <= 8; ++q) {
      const double s = q < 4 ? lo + (best.sigma - lo) * q / 4.0 : best.sigma + (hi - best.sigma) * (q - 4) / 4.0;
      fs.push_back(s);
    }
    consider(fine, eval_all(fine), fs, fine.size());
  }

  PenroseReport r;
  // sigma -> infinity: the coupling vanishes and |P~| -> 1.
  r.margin = std::min(best.value, 1.0);
  r.argmin = best.pt.z;
  r.argmin_sigma = best.sigma;
  r.resolution = cfg;
  r.rough = eng.rough();
  for (double c0 : cfg.c0_values) r.stable_at[c0] = r.margin >= c0;
  return r;
}

double penrose_margin_field(const PhaseField& f, const ScanConfig& cfg, std::size_t x_samples) {
  if (x_samples < 1 || x_samples > f.n_x()) throw InvalidArgument("x_samples must lie in [1, n_x]");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < x_samples; ++s) {
    const std::size_t j = s * f.n_x() / x_samples;
    m = std::min(m, penrose_margin(f.column(j), cfg).margin);
  }
  return m;
}

}  // namespace penkin
