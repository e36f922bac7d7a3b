#include "penkin/kernelops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <memory>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "penkin/core/fft.hpp"
#include "penkin/core/ops.hpp"
#include "penkin/error.hpp"
#include "penkin/simd/kernels.hpp"

namespace penkin {
namespace {

constexpr double pi = std::numbers::pi;
constexpr std::uint64_t kPowerSeed = 20240229;
constexpr int kPowerIterations = 200;
constexpr int kMinIterations = 50;

// Full x-spectrum of one real row, normalised so the zero mode is the mean.
std::vector<cplx> spectrum(std::span<const double> row, const ComplexFft& fft) {
  const std::size_t n = row.size();
  std::vector<cplx> in(row.begin(), row.end()), out(n);
  fft.forward(in.data(), out.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<std::vector<cplx>> spectra(const SpaceTimeField& F) {
  const ComplexFft fft(F.n_x());
  std::vector<std::vector<cplx>> out(F.n_t());
  for (std::size_t i = 0; i < F.n_t(); ++i) out[i] = spectrum(F.slice(i), fft);
  return out;
}

SpaceTimeField synthesize_all(const std::vector<std::vector<cplx>>& spec, const SpaceTimeField& like) {
  SpaceTimeField out(like.n_t(), like.dt(), like.grid_x());
  const ComplexFft fft(like.n_x());
  std::vector<cplx> buf(like.n_x());
  for (std::size_t i = 0; i < like.n_t(); ++i) {
    fft.backward(spec[i].data(), buf.data());
    for (std::size_t j = 0; j < like.n_x(); ++j) out(i, j) = buf[j].real();
  }
  return out;
}

// x-coefficients of g(., v_m) for every velocity node: result[l][m].
std::vector<std::vector<cplx>> x_coefficients(const PhaseField& g) {
  const std::size_t nx = g.n_x(), nv = g.n_v();
  const ComplexFft fft(nx);
  std::vector<std::vector<cplx>> out(nx, std::vector<cplx>(nv));
  std::vector<double> col(nx);
  for (std::size_t m = 0; m < nv; ++m) {
    for (std::size_t j = 0; j < nx; ++j) col[j] = g(j, m);
    auto s = spectrum(col, fft);
    for (std::size_t l = 0; l < nx; ++l) out[l][m] = s[l];
  }
  return out;
}

// dv sum_m c[m] exp(-i xi v_m) for complex samples c, at each xi.
void complex_transform(const std::vector<cplx>& c, const GridV& gv, const std::vector<double>& xi, cplx* out) {
  const std::size_t nv = c.size();
  std::vector<double> re(nv), im(nv);
  for (std::size_t m = 0; m < nv; ++m) {
    re[m] = c[m].real();
    im[m] = c[m].imag();
  }
  std::vector<cplx> a(xi.size()), b(xi.size());
  const auto& k = simd::kernels();
  k.fourier_sum(re.data(), nv, gv.first(), gv.dv(), xi.data(), xi.size(), a.data());
  k.fourier_sum(im.data(), nv, gv.first(), gv.dv(), xi.data(), xi.size(), b.data());
  for (std::size_t m = 0; m < xi.size(); ++m) out[m] = gv.dv() * (a[m] + cplx(0.0, 1.0) * b[m]);
}

// D[l][q][r] = i k_q Gamma_{k_q, r}(l) for the significant x-modes l of g,
// with Gamma_{k, r}(l) = dv sum_m g_l(v_m) exp(-i k r dt v_m).
struct Modal {
  std::vector<std::size_t> modes;
  std::size_t n = 0, n_r = 0;
  std::vector<cplx> D;
  cplx at(std::size_t li, std::size_t q, std::size_t r) const { return D[(li * n + q) * n_r + r]; }
};

Modal modal(const PhaseField& g, const std::vector<std::size_t>& lags, double dt) {
  const auto& gx = g.grid_x();
  const std::size_t n = gx.size();
  const auto coeffs = x_coefficients(g);
  double peak = 0.0;
  std::vector<double> mag(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    for (const auto& c : coeffs[l]) mag[l] = std::max(mag[l], std::abs(c));
    peak = std::max(peak, mag[l]);
  }
  Modal M;
  M.n = n;
  M.n_r = lags.size();
  for (std::size_t l = 0; l < n; ++l) {
    if (peak > 0.0 && mag[l] > 1e-13 * peak) M.modes.push_back(l);
  }
  M.D.assign(M.modes.size() * n * M.n_r, cplx(0.0));
#pragma omp parallel for schedule(static) collapse(2)
  for (std::size_t li = 0; li < M.modes.size(); ++li) {
    for (std::size_t q = 0; q < n; ++q) {
      if (q == n / 2) continue;  // no derivative at Nyquist
      const double k = gx.wavenumber(q);
      std::vector<double> xi(M.n_r);
      for (std::size_t r = 0; r < M.n_r; ++r) xi[r] = k * static_cast<double>(lags[r]) * dt;
      std::vector<cplx> gam(M.n_r);
      complex_transform(coeffs[M.modes[li]], g.grid_v(), xi, gam.data());
      for (std::size_t r = 0; r < M.n_r; ++r) M.D[(li * n + q) * M.n_r + r] = cplx(0.0, k) * gam[r];
    }
  }
  return M;
}

double trap_weight(std::size_t i, std::size_t j, double dt) {
  if (i == 0) return 0.0;
  return (j == 0 || j == i) ? 0.5 * dt : dt;
}

void check_grids(const KernelFunction& G, const SpaceTimeField& F) {
  if (!(G.grid_x() == F.grid_x())) throw GridMismatch("kernel and field use different x grids");
  if (!G.is_separable() && (G.table_n_t() != F.n_t() || G.table_dt() != F.dt())) {
    throw GridMismatch("kernel table and field use different time grids");
  }
}

// Shared driver for K and K*: `adjoint` flips the summation direction and
// conjugates the modal weights.
SpaceTimeField apply_modal(const KernelFunction& G, const SpaceTimeField& F, bool adjoint) {
  check_grids(G, F);
  const std::size_t nt = F.n_t(), n = F.n_x();
  const double dt = F.dt();
  const auto Fh = spectra(F);
  std::vector<std::vector<cplx>> out(nt, std::vector<cplx>(n, cplx(0.0)));

  std::vector<Modal> table;
  Modal sep;
  if (G.is_separable()) {
    std::vector<std::size_t> lags(nt);
    for (std::size_t r = 0; r < nt; ++r) lags[r] = r;
    sep = modal(G.slice(0, 0), lags, dt);
  } else {
    table.resize(nt * nt);
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = 0; j <= i; ++j) table[i * nt + j] = modal(G.slice(i, j), {i - j}, dt);
    }
  }
  auto weights = [&](std::size_t i, std::size_t j, std::size_t& r) -> const Modal& {
    if (G.is_separable()) {
      r = i - j;
      return sep;
    }
    r = 0;
    return table[i * nt + j];
  };

#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t a = 0; a < nt; ++a) {
    auto& acc = out[a];
    // forward: output time i = a, sum over j <= i; adjoint: output j = a, sum over i >= j.
    const std::size_t b0 = adjoint ? a : 0;
    const std::size_t b1 = adjoint ? nt : a + 1;
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t i = adjoint ? b : a;
      const std::size_t j = adjoint ? a : b;
      const double w = trap_weight(i, j, dt);
      if (w == 0.0) continue;
      std::size_t r = 0;
      const Modal& M = weights(i, j, r);
      const auto& src = Fh[b];
      for (std::size_t li = 0; li < M.modes.size(); ++li) {
        const std::size_t l = M.modes[li];
        for (std::size_t q = 0; q < n; ++q) {
          const std::size_t p = (q + l) % n;
          if (!adjoint) {
            acc[p] += w * M.at(li, q, r) * src[q];
          } else {
            acc[q] += w * std::conj(M.at(li, q, r)) * src[p];
          }
        }
      }
    }
  }
  return synthesize_all(out, F);
}

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void scale(SpaceTimeField& F, double c) {
  for (double& x : F.data()) x *= c;
}

// (1 + |xi|)^{s1} |F_v g(xi)| maximised over the xi grid, per x-mode.
std::vector<double> slice_profile(const PhaseField& g, double s1) {
  const auto& gv = g.grid_v();
  const std::size_t nv = gv.size();
  const double band = pi / gv.dv();
  std::vector<double> xi(nv);
  for (std::size_t m = 0; m < nv; ++m) xi[m] = -band + 2.0 * band * static_cast<double>(m) / static_cast<double>(nv - 1);
  const auto coeffs = x_coefficients(g);
  std::vector<double> out(g.n_x(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t l = 0; l < g.n_x(); ++l) {
    std::vector<cplx> t(nv);
    complex_transform(coeffs[l], gv, xi, t.data());
    double best = 0.0;
    for (std::size_t m = 0; m < nv; ++m) {
      best = std::max(best, std::pow(1.0 + std::abs(xi[m]), s1) * std::abs(t[m]) / (2.0 * pi));
    }
    out[l] = best;
  }
  return out;
}

std::vector<double> slice_bound(const PhaseField& g, double s1) {
  const auto& gv = g.grid_v();
  const int order = static_cast<int>(std::ceil(s1));
  const auto coeffs = x_coefficients(g);
  std::vector<double> out(g.n_x(), 0.0);
  for (std::size_t l = 0; l < g.n_x(); ++l) {
    std::vector<cplx> d = coeffs[l];
    double total = 0.0, binom = 1.0, pw = 1.0;
    for (int j = 0; j <= order; ++j) {
      double l1 = 0.0;
      for (const auto& c : d) l1 += std::abs(c);
      total += binom * pw * l1;
      // Divided difference of the zero-extended sequence.
      std::vector<cplx> next(d.size() + 1);
      for (std::size_t m = 0; m <= d.size(); ++m) {
        const cplx hi = m < d.size() ? d[m] : cplx(0.0);
        const cplx lo = m > 0 ? d[m - 1] : cplx(0.0);
        next[m] = (hi - lo) / gv.dv();
      }
      d = std::move(next);
      binom = binom * (order - j) / (j + 1);
      pw *= 0.5 * pi;
    }
    out[l] = gv.dv() * total / (2.0 * pi);
  }
  return out;
}

template <class SliceFn>
double weighted_norm(const KernelFunction& G, double s1, double s2, double T, SliceFn fn) {
  if (!(s1 > 1.0)) throw InvalidArgument("s1 must exceed 1");
  if (!(s2 > 0.5)) throw InvalidArgument("s2 must exceed 1/2");
  if (!(T > 0.0)) throw InvalidArgument("T must be positive");
  const auto& gx = G.grid_x();
  auto combine = [&](const std::vector<double>& sup_s) {
    double acc = 0.0;
    for (std::size_t l = 0; l < sup_s.size(); ++l) {
      const double w = std::pow(1.0 + std::abs(gx.wavenumber(l)), s2) * sup_s[l];
      acc += w * w;
    }
    return std::sqrt(acc);
  };
  if (G.is_separable()) return combine(fn(G.slice(0, 0), s1));
  double best = 0.0;
  for (std::size_t i = 0; i < G.table_n_t(); ++i) {
    if (static_cast<double>(i) * G.table_dt() > T) break;
    std::vector<double> sup_s(gx.size(), 0.0);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto p = fn(G.slice(i, j), s1);
      for (std::size_t l = 0; l < p.size(); ++l) sup_s[l] = std::max(sup_s[l], p[l]);
    }
    best = std::max(best, combine(sup_s));
  }
  return best;
}

}  // namespace

SpaceTimeField::SpaceTimeField(std::size_t n_t, double dt, GridX gx)
    : SpaceTimeField(n_t, dt, gx, std::vector<double>(n_t * gx.size(), 0.0)) {}

SpaceTimeField::SpaceTimeField(std::size_t n_t, double dt, GridX gx, std::vector<double> values)
    : n_t_(n_t), dt_(dt), gx_(gx), data_(std::move(values)) {
  if (n_t < 2) throw InvalidArgument("need at least two time levels");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (data_.size() != n_t * gx.size()) throw GridMismatch("space-time values do not match n_t * n_x");
  for (double x : data_) {
    if (!std::isfinite(x)) throw InvalidArgument("space-time field has a non-finite value");
  }
}

double l2_norm(const SpaceTimeField& F) { return std::sqrt(inner(F, F)); }

double inner(const SpaceTimeField& U, const SpaceTimeField& W) {
  if (!U.same_grid(W)) throw GridMismatch("inner product of fields on different grids");
  double acc = 0.0;
  for (std::size_t k = 0; k < U.data().size(); ++k) acc += U.data()[k] * W.data()[k];
  return acc * U.dt() * U.grid_x().dx();
}

KernelFunction KernelFunction::separable(PhaseField g) {
  KernelFunction k;
  k.slices_.push_back(std::move(g));
  return k;
}

KernelFunction KernelFunction::table(std::size_t n_t, double dt, std::vector<PhaseField> slices) {
  if (n_t < 2 || slices.size() != n_t * n_t) throw GridMismatch("kernel table needs n_t * n_t slices");
  for (const auto& s : slices) {
    if (!s.same_grid(slices.front())) throw GridMismatch("kernel slices use different grids");
  }
  KernelFunction k;
  k.slices_ = std::move(slices);
  k.table_n_t_ = n_t;
  k.table_dt_ = dt;
  return k;
}

KernelFunction KernelFunction::from_distribution(const PhaseField& f0) {
  PhaseField g(f0.grid_x(), f0.grid_v());
  for (std::size_t j = 0; j < f0.n_x(); ++j) {
    const auto d = derivative_v(f0.column(j));
    std::copy(d.values().begin(), d.values().end(), g.row(j).begin());
  }
  return separable(std::move(g));
}

const PhaseField& KernelFunction::slice(std::size_t i, std::size_t j) const {
  return is_separable() ? slices_.front() : slices_[i * table_n_t_ + j];
}

KernelFunction KernelFunction::scaled(double c) const {
  KernelFunction k = *this;
  for (auto& s : k.slices_) {
    for (double& x : s.data()) x *= c;
  }
  return k;
}

SpaceTimeField apply_K(const KernelFunction& G, const SpaceTimeField& F) { return apply_modal(G, F, false); }

SpaceTimeField apply_K_adjoint(const KernelFunction& G, const SpaceTimeField& W) {
  return apply_modal(G, W, true);
}

double norm_G(const KernelFunction& G, double s1, double s2, double T) {
  return weighted_norm(G, s1, s2, T, slice_profile);
}

double norm_G_sobolev_bound(const KernelFunction& G, double s1, double s2, double T) {
  return weighted_norm(G, s1, s2, T, slice_bound);
}

NormEstimate kernel_norm_estimate(const KernelFunction& G, std::size_t n_t, double T) {
  const std::size_t nx = G.grid_x().size();
  if (n_t < 2 || !(T > 0.0)) throw InvalidArgument("need n_t >= 2 and T > 0");
  if (n_t * nx > (std::size_t{1} << 16)) throw InvalidArgument("n_t * n_x exceeds 2^16");
  const double dt = T / static_cast<double>(n_t);
  SpaceTimeField x(n_t, dt, G.grid_x());
  std::uint64_t state = kPowerSeed;
  for (double& v : x.data()) v = 2.0 * static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 - 1.0;
  scale(x, 1.0 / l2_norm(x));

  // Power iteration on K*K, accelerated by keeping the whole Krylov basis
  // (Lanczos with full reorthogonalisation); the estimate is the top Ritz
  // value after each application.
  NormEstimate est;
  std::vector<SpaceTimeField> basis{x};
  std::vector<double> alpha, beta;
  double ritz_prev = 0.0, ritz = 0.0;
  for (int it = 1; it <= kPowerIterations; ++it) {
    const auto& q = basis.back();
    auto w = apply_K_adjoint(G, apply_K(G, q));
    alpha.push_back(inner(q, w));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double c = inner(b, w);
        for (std::size_t k = 0; k < w.data().size(); ++k) w.data()[k] -= c * b.data()[k];
      }
    }
    const std::size_t m = alpha.size();
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      Tm(k, k) = alpha[k];
      if (k + 1 < m) Tm(k, k + 1) = Tm(k + 1, k) = beta[k];
    }
    ritz_prev = ritz;
    ritz = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Tm, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    est.iterations = it;
    const double b = l2_norm(w);
    if (ritz <= 0.0) return est;
    // Invariant subspace found: the Ritz value is exact.
    if (b <= 1e-14 * std::sqrt(ritz)) {
      ritz_prev = ritz;
      break;
    }
    if (it >= kMinIterations && std::abs(ritz - ritz_prev) <= 1e-6 * ritz) break;
    beta.push_back(b);
    scale(w, 1.0 / b);
    basis.push_back(std::move(w));
  }
  est.last_change = std::abs(ritz - ritz_prev) / ritz;
  if (est.last_change > 1e-6) {
    throw NonConvergence("Ritz value still moving by " + std::to_string(est.last_change) + " after " +
                         std::to_string(est.iterations) + " iterations");
  }
  est.sigma_max = std::sqrt(ritz);
  return est;
}

SpaceTimeField quantize_symbol(const SymbolFn& a, double gamma, const SpaceTimeField& u) {
  const std::size_t nt = u.n_t(), n = u.n_x();
  // Mass near the time edges would wrap around the periodic transform.
  const std::size_t edge = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(nt))));
  double total = 0.0, rim = 0.0;
  for (std::size_t i = 0; i < nt; ++i) {
    for (double x : u.slice(i)) {
      total += std::abs(x);
      if (i < edge || i >= nt - edge) rim += std::abs(x);
    }
  }
  if (total == 0.0) return SpaceTimeField(nt, u.dt(), u.grid_x());
  if (rim > 1e-8 * total) {
    throw WindowViolation("fraction " + std::to_string(rim / total) + " of |u| lies in the outer 5% of the window");
  }

  const std::size_t N = 2 * nt;
  const auto& gx = u.grid_x();
  const ComplexFft tf(N);
  const auto xs = spectra(u);
  // uh[q][m]: time transform of each x-mode.
  std::vector<std::vector<cplx>> uh(n, std::vector<cplx>(N));
  {
    std::vector<cplx> buf(N);
    for (std::size_t q = 0; q < n; ++q) {
      std::fill(buf.begin(), buf.end(), cplx(0.0));
      for (std::size_t i = 0; i < nt; ++i) buf[i] = xs[i][q];
      tf.forward(buf.data(), uh[q].data());
    }
  }
  std::vector<double> tau(N);
  for (std::size_t m = 0; m < N; ++m) {
    const double mm = m <= N / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(N);
    tau[m] = 2.0 * pi * mm / (static_cast<double>(N) * u.dt());
  }

  SpaceTimeField out(nt, u.dt(), gx);
  std::exception_ptr err;
#pragma omp parallel
  {
    std::vector<cplx> b(N), t(N);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t p = 0; p < n; ++p) {
      try {
        std::fill(b.begin(), b.end(), cplx(0.0));
        for (std::size_t q = 0; q < n; ++q) {
          const double k = gx.wavenumber(q);
          const cplx e = std::polar(1.0, k * gx.node(p));
          for (std::size_t m = 0; m < N; ++m) b[m] += a(p, gamma, tau[m], k) * uh[q][m] * e;
        }
        tf.backward(b.data(), t.data());
        for (std::size_t i = 0; i < nt; ++i) out(i, p) = t[i].real() / static_cast<double>(N);
      } catch (...) {
#pragma omp critical(quantize_err)
        if (!err) err = std::current_exception();
      }
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

SymbolFn kernel_symbol(const PhaseField& f0) {
  auto engines = std::make_shared<std::vector<PenroseEngine>>();
  engines->reserve(f0.n_x());
  for (std::size_t j = 0; j < f0.n_x(); ++j) engines->emplace_back(f0.column(j));
  return [engines](std::size_t j, double gamma, double tau, double k) -> cplx {
    if (k == 0.0) return 0.0;
    return 2.0 * pi * (*engines)[j].symbol({gamma, tau, k}, PenroseMode::v_form);
  };
}

Equivalence kernel_symbol_equivalence(const PhaseField& f0, double gamma, const SpaceTimeField& h) {
  if (!(f0.grid_x() == h.grid_x())) throw GridMismatch("f0 and h use different x grids");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  const double window = static_cast<double>(h.n_t()) * h.dt();
  if (gamma * window > 40.0) throw InvalidArgument("gamma * window exceeds 40");

  SpaceTimeField F = h;
  for (std::size_t i = 0; i < F.n_t(); ++i) {
    const double w = std::exp(gamma * F.time(i));
    for (double& x : F.slice(i)) x *= w;
  }
  SpaceTimeField lhs = apply_K(KernelFunction::from_distribution(f0), F);
  for (std::size_t i = 0; i < lhs.n_t(); ++i) {
    const double w = std::exp(-gamma * lhs.time(i));
    for (double& x : lhs.slice(i)) x *= w;
  }
  SpaceTimeField rhs = quantize_symbol(kernel_symbol(f0), gamma, h);

  SpaceTimeField diff = lhs;
  for (std::size_t k = 0; k < diff.data().size(); ++k) diff.data()[k] -= rhs.data()[k];
  const double nr = l2_norm(rhs), nd = l2_norm(diff);
  double disc = 0.0;
  if (nr > 0.0) {
    disc = nd / nr;
  } else if (nd > 0.0) {
    disc = std::numeric_limits<double>::infinity();
  }
  return {disc, std::move(lhs), std::move(rhs)};
}

}  // namespace penkin
