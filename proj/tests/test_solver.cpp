#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "penkin/core/fft.hpp"
#include "penkin/core/ops.hpp"
#include "penkin/parallel.hpp"
#include "penkin/profiles.hpp"
#include "penkin/solver.hpp"

using namespace penkin;
namespace {
constexpr double pi = std::numbers::pi;

double gauss(double v, double u = 0.0) { return std::exp(-0.5 * (v - u) * (v - u)) / std::sqrt(2.0 * pi); }

PhaseField perturbed(double delta, std::size_t nx = 32, std::size_t nv = 128) {
  InitialDataSpec s;
  s.amplitude = delta;
  return build_initial_data(s, GridX(nx), GridV(nv));
}

double max_diff(const PhaseField& a, const PhaseField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

double l2_diff(const PhaseField& a, const PhaseField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) s += std::pow(a.data()[k] - b.data()[k], 2);
  return std::sqrt(s * a.grid_x().dx() * a.grid_v().dv());
}

double mode_amp(const PhaseField& f, std::size_t q) { return std::abs(fourier_coefficients(density(f).values())[q]); }
}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("free streaming") {
    GridX gx(32, 4.0);
    GridV gv(64, 6.0);
    const double k = 3.0 * 2.0 * pi / 4.0, dt = 0.07;
    PhaseField f(gx, gv);
    for (std::size_t j = 0; j < gx.size(); ++j) {
      for (std::size_t i = 0; i < gv.size(); ++i) f(j, i) = std::cos(k * gx.node(j)) * gauss(gv.node(i));
    }
    const auto same = advect_x(f, 0.0);
    for (std::size_t n = 0; n < f.data().size(); ++n) CHECK(same.data()[n] == f.data()[n]);

    const auto g = advect_x(f, dt);
    double err = 0.0;
    for (std::size_t j = 0; j < gx.size(); ++j) {
      for (std::size_t i = 0; i < gv.size(); ++i) {
        err = std::max(err, std::abs(g(j, i) - std::cos(k * (gx.node(j) - gv.node(i) * dt)) * gauss(gv.node(i))));
      }
    }
    CHECK(err <= 1e-14);
    CHECK(max_diff(advect_x(g, -dt), f) <= 1e-14);
  }

  TEST_CASE("force step") {
    GridX gx(4);
    GridV gv(256, 8.0);
    const auto f = perturbed(0.0, 4, 256);
    CHECK(max_diff(advect_v(f, SpatialField(gx, 0.0), 0.1), f) <= 1e-15);

    const double c = 0.8, dt = 0.25;
    const auto g = advect_v(f, SpatialField(gx, c), dt);
    double err = 0.0;
    for (std::size_t i = 0; i < gv.size(); ++i) err = std::max(err, std::abs(g(1, i) - gauss(gv.node(i), c * dt)));
    CHECK(err <= 1e-6);

    double back[2];
    int n = 0;
    for (std::size_t nv : {64, 128}) {
      const auto h = perturbed(0.1, 4, nv);
      SpatialField E(gx);
      for (std::size_t j = 0; j < gx.size(); ++j) E[j] = 0.3 * std::sin(gx.node(j)) + 0.11;
      const auto there = advect_v(h, E, 0.37);
      back[n++] = max_diff(advect_v(there, E, -0.37), h);
    }
    CHECK(back[0] / back[1] > 10.0);
  }

  TEST_CASE("uniform Maxwellian is a fixed point") {
    const auto f = perturbed(0.0);
    SolverConfig cfg;
    cfg.mode = FieldMode::vp(0.1);
    auto g = f;
    for (int k = 0; k < 5; ++k) {
      const auto h = step(g, cfg);
      CHECK(max_diff(h, g) <= 1e-13);
      g = h;
    }
  }

  TEST_CASE("Strang splitting is second order") {
    const auto f0 = perturbed(0.05, 32, 128);
    SolverConfig cfg;
    cfg.mode = FieldMode::vp(0.1);
    cfg.t_end = 1.0;
    cfg.diagnostics_every = 1000;
    std::vector<PhaseField> finals;
    for (double dt : {0.1, 0.05, 0.025}) {
      cfg.dt = dt;
      finals.push_back(run(f0, cfg).final);
    }
    const double d1 = l2_diff(finals[0], finals[1]), d2 = l2_diff(finals[1], finals[2]);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.15));
  }

  TEST_CASE("vp with tiny epsilon tracks vdb") {
    const auto f0 = perturbed(0.05, 32, 128);
    SolverConfig a, b;
    a.mode = FieldMode::vdb();
    b.mode = FieldMode::vp(1e-4);
    a.dt = b.dt = 0.02;
    const auto fa = run(f0, a).final, fb = run(f0, b).final;
    CHECK(l2_diff(fa, fb) <= 1e-6);
  }

  TEST_CASE("one-step run") {
    const auto f0 = perturbed(0.05);
    SolverConfig cfg;
    cfg.mode = FieldMode::vp(0.1);
    cfg.t_end = cfg.dt;
    const auto r = run(f0, cfg);
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[0].time == 0.0);
    CHECK(r.trace[1].time == cfg.t_end);
    CHECK(std::abs(r.trace[1].mass - r.trace[0].mass) <= 1e-12 * r.trace[0].mass);
  }

  TEST_CASE("records, conservation and csv") {
    const auto f0 = perturbed(0.05, 32, 128);
    SolverConfig cfg;
    cfg.mode = FieldMode::vp(0.1);
    cfg.t_end = 0.5;
    cfg.diagnostics_every = 25;
    cfg.penrose_scan = ScanConfig{};
    cfg.x_samples = 2;
    int hooked = 0;
    const auto r = run(f0, cfg, [&](const PhaseField&, const DiagnosticsRecord&) { ++hooked; });
    CHECK(r.trace.size() == 5);
    CHECK(hooked == 5);
    for (const auto& rec : r.trace) {
      CHECK(rec.penrose_margin.has_value());
      CHECK(std::abs(rec.mass - r.trace[0].mass) <= 1e-8 * r.trace[0].mass);
      CHECK(rec.rho_sobolev.count(3.0) == 1);
    }
    CHECK(std::abs(r.trace.back().total_energy - r.trace[0].total_energy) <= 1e-4 * r.trace[0].total_energy);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].n_proxy >= r.trace[k - 1].n_proxy);
    CHECK(positivity_ok(r.trace));
    const auto csv = trace_csv(r.trace);
    CHECK(csv.rfind("time,mass,momentum,total_energy,l2_f,linf_f,min_f,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  }

  TEST_CASE("stable data stays bounded") {
    InitialDataSpec s;
    s.amplitude = 0.01;
    const auto f0 = build_initial_data(s, GridX(32), GridV(256));
    SolverConfig cfg;
    cfg.mode = FieldMode::vdb();
    const double a0 = mode_amp(f0, 1);
    double worst = 0.0;
    run(f0, cfg, [&](const PhaseField& f, const DiagnosticsRecord&) { worst = std::max(worst, mode_amp(f, 1) / a0); });
    CHECK(worst <= 3.0);
  }

  TEST_CASE("non-finite data is reported as a blowup") {
    auto f0 = perturbed(0.05);
    SolverConfig cfg;
    cfg.mode = FieldMode::vp(0.1);
    f0(3, 60) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(run(f0, cfg), InvalidArgument);
    // finite, but the x-transform of this column overflows
    f0(3, 60) = 1.5e308;
    f0(4, 60) = 1.5e308;
    try {
      run(f0, cfg);
      FAIL("expected NumericalBlowup");
    } catch (const NumericalBlowup& e) {
      CHECK(e.trace.size() == 1);
    }
  }

  TEST_CASE("configuration guards") {
    SolverConfig cfg;
    cfg.mode = FieldMode::vp(0.1);
    cfg.dt = 1.0;  // dt * v_max = 8 > L / 2
    CHECK_THROWS_AS(cfg.validate(GridX(32), GridV(64)), InvalidArgument);
    cfg.dt = 0.3;
    cfg.t_end = 1.0;
    CHECK(cfg.steps() == 4);
    CHECK(cfg.dt_effective() == 0.25);
    cfg.t_end = 0.1;
    CHECK_THROWS_AS(cfg.validate(GridX(32), GridV(64)), InvalidArgument);
  }

  TEST_CASE("thread count does not change results") {
    const auto f0 = perturbed(0.05, 32, 128);
    SolverConfig cfg;
    cfg.mode = FieldMode::vp(0.2);
    cfg.t_end = 0.2;
    const int before = threads();
    set_threads(1);
    const auto a = run(f0, cfg).final;
    set_threads(4);
    const auto b = run(f0, cfg).final;
    set_threads(before);
    for (std::size_t k = 0; k < a.data().size(); ++k) CHECK(a.data()[k] == b.data()[k]);
  }
}
