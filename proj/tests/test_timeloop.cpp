// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dgtd/fields.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/operators.hpp"
#include "dgtd/pml.hpp"
#include "dgtd/reference_element.hpp"
#include "dgtd/timeloop.hpp"

using namespace dgtd;
using std::numbers::pi;

namespace
{

Mesh reference_mesh(int d)
{
  Mesh m;
  m.dim = d;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  if (d == 3)
  {
    m.vertices.push_back({0, 0, 1});
  }
  m.elements = {{0, 1, 2, d == 3 ? 3 : -1}};
  m.regions = {"air"};
  for (int f = 0; f <= d; ++f)
  {
    m.boundary_tags[m.facet_key(0, f)] = "pec";
  }
  build_facets(m);
  return m;
}

Mesh square_mesh(int d, int n, double jiggle, unsigned seed)
{
  StructuredSpec s;
  s.dim = d;
  s.cells = {n, n, n};
  Mesh m = generate_structured(s);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-jiggle, jiggle);
  for (Vec3 &x : m.vertices)
  {
    bool interior = true;
    for (int i = 0; i < d; ++i)
    {
      interior = interior && x[i] > 1e-9 && x[i] < 1 - 1e-9;
    }
    if (interior)
    {
      for (int i = 0; i < d; ++i)
      {
        x[i] += u(rng);
      }
    }
  }
  build_facets(m);
  return m;
}

struct Setup
{
  Mesh mesh;
  ReferenceElement ref;
  MaxwellOperator op;
  Materials mat;
  std::vector<double> alpha;

  Setup(Mesh m, int p)
      : mesh(std::move(m)), ref(mesh.dim, p), op(mesh, ref), mat(Materials::uniform(mesh)),
        alpha(penalty_parameters(mesh, p, 1.0))
  {
  }
};

void randomize(std::vector<double> &v, std::mt19937 &rng)
{
  std::normal_distribution<double> n(0.0, 1.0);
  for (double &x : v)
  {
    x = n(rng);
  }
}

double rel_diff(const std::vector<double> &a, const std::vector<double> &b)
{
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

// TE mode of the unit square with PEC walls.
const double kOmega = pi * std::sqrt(2.0);
Vec3 mode_e(const Vec3 &x, double t)
{
  const double s = std::sin(kOmega * t) * pi / kOmega;
  return {-s * std::cos(pi * x[0]) * std::sin(pi * x[1]),
          s * std::sin(pi * x[0]) * std::cos(pi * x[1]), 0.0};
}
Vec3 mode_h(const Vec3 &x, double t)
{
  return {0.0, 0.0, std::cos(pi * x[0]) * std::cos(pi * x[1]) * std::cos(kOmega * t)};
}

}  // namespace

TEST_CASE("projection reproduces polynomials and evaluates covariantly")
{
  for (int d : {2, 3})
  {
    const Mesh mesh = square_mesh(d, 2, 0.1, 3);
    const int p = 2;
    const ReferenceElement ref(d, p);
    // Degree p + 1 for e, degree p for h.
    const VectorField fe = [](const Vec3 &x) {
      return Vec3{x[0] * x[1] * x[1] + 1.0, x[0] * x[0] - 2.0 * x[2], x[1] * x[2] * x[2]};
    };
    const VectorField fh = [](const Vec3 &x) {
      return Vec3{x[0] * x[1], x[2] - x[0], x[1] * x[1] + 0.5};
    };
    const auto e = project_field(mesh, ref, FieldKind::E, fe);
    const auto h = project_field(mesh, ref, FieldKind::H, fh);
    CHECK(l2_error(mesh, ref, FieldKind::E, e, &fe) < 1e-13);
    CHECK(l2_error(mesh, ref, FieldKind::H, h, &fh) < 1e-13);

    const Vec3 r{0.2, 0.3, d == 3 ? 0.1 : 0.0};
    for (int el = 0; el < mesh.num_elements(); ++el)
    {
      const ElementGeometry g = element_geometry(mesh, el);
      const Vec3 x = g.to_physical(r);
      const Vec3 ve = evaluate_field(mesh, ref, FieldKind::E, e, el, r);
      const Vec3 want = fe(x);
      for (int k = 0; k < d; ++k)
      {
        CHECK(std::abs(ve[k] - want[k]) < 1e-12);
      }
      const Vec3 vh = evaluate_field(mesh, ref, FieldKind::H, h, el, r);
      CHECK(std::abs(vh[2] - fh(x)[2]) < 1e-12);
    }
  }
}

TEST_CASE("zero state stays zero")
{
  Setup s(square_mesh(2, 2, 0.0, 1), 2);
  Stepper st(s.op, s.mat, {}, 0.0, s.alpha, 1e-3);
  FieldState z = st.zero_state();
  for (int k = 0; k < 5; ++k)
  {
    st.step(z);
  }
  for (const auto *v : {&z.e, &z.h, &z.hs, &z.p, &z.q})
  {
    for (double x : *v)
    {
      CHECK(x == 0.0);
    }
  }
  CHECK(z.step == 5);
  CHECK(st.energy(z) == 0.0);
}

TEST_CASE("energy of a single unit mode is one half")
{
  for (int d : {2, 3})
  {
    Setup s(reference_mesh(d), 2);
    Stepper st(s.op, s.mat, {}, 0.0, s.alpha, 1e-3);
    FieldState z = st.zero_state();
    z.e[s.ref.e_components() * 4 + 1] = 1.0;
    CHECK(std::abs(st.energy(z) - 0.5) < 1e-14);
    CHECK(std::abs(st.averaged_energy(z) - 0.5) < 1e-14);
  }
}

TEST_CASE("stable timestep")
{
  StructuredSpec spec;
  spec.cells = {4, 4, 1};
  Mesh m = generate_structured(spec);
  const Materials mat = Materials::uniform(m);
  const double t2 = stable_timestep(m, 2, mat);
  for (Vec3 &x : m.vertices)
  {
    x = 2.0 * x;
  }
  CHECK(std::abs(stable_timestep(m, 2, mat) - 2.0 * t2) < 1e-15);
  CHECK(stable_timestep(m, 3, mat) < stable_timestep(m, 2, mat));
  CHECK(stable_timestep(m, 2, Materials::uniform(m, 4.0, 1.0)) ==
        doctest::Approx(2.0 * stable_timestep(m, 2, mat)));
}

TEST_CASE("empirical stability limit exceeds the formula")
{
  Setup s(square_mesh(2, 4, 0.0, 1), 2);
  const double tau_formula = stable_timestep(s.mesh, 2, s.mat);
  std::mt19937 rng(5);
  FieldState init;
  {
    Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau_formula);
    init = st.zero_state();
    randomize(init.e, rng);
    randomize(init.h, rng);
    init.h_prev = init.h;
  }
  auto stable = [&](double tau) {
    Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau);
    st.check_interval = 0;
    FieldState x = init;
    const double e0 = st.energy(x);
    for (int k = 0; k < 2000; ++k)
    {
      st.step(x);
    }
    const double e1 = st.energy(x);
    return std::isfinite(e1) && e1 < 10.0 * std::abs(e0);
  };
  CHECK(stable(tau_formula));
  double lo = tau_formula, hi = 64.0 * tau_formula;
  REQUIRE_FALSE(stable(hi));
  for (int it = 0; it < 8; ++it)
  {
    const double mid = std::sqrt(lo * hi);
    (stable(mid) ? lo : hi) = mid;
  }
  MESSAGE("stability boundary / formula = " << lo / tau_formula);
  CHECK(lo > tau_formula);
}

TEST_CASE("leapfrog is time reversible")
{
  for (int d : {2, 3})
  {
    Setup s(square_mesh(d, 2, 0.08, 7), 2);
    const double tau = stable_timestep(s.mesh, 2, s.mat);
    Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau);
    std::mt19937 rng(9);
    FieldState x = st.zero_state();
    randomize(x.e, rng);
    randomize(x.h, rng);
    randomize(x.hs, rng);
    const FieldState x0 = x;
    for (int k = 0; k < 200; ++k)
    {
      st.step(x);
    }
    CHECK(rel_diff(x.e, x0.e) > 1e-3);
    st.set_tau(-tau);
    for (int k = 0; k < 200; ++k)
    {
      st.step(x);
    }
    CHECK(rel_diff(x.e, x0.e) < 1e-11);
    CHECK(rel_diff(x.h, x0.h) < 1e-11);
    CHECK(rel_diff(x.hs, x0.hs) < 1e-11);
    CHECK(x.step == 0);
  }
}

TEST_CASE("staggered energy is conserved in a closed cavity")
{
  Setup s(square_mesh(2, 3, 0.05, 4), 2);
  const double tau = stable_timestep(s.mesh, 2, s.mat);
  Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau);
  std::mt19937 rng(2);
  FieldState x = st.zero_state();
  randomize(x.e, rng);
  randomize(x.h, rng);
  x.h_prev = x.h;
  st.step(x);
  double lo = 1e300, hi = 0.0;
  for (int k = 0; k < 1000; ++k)
  {
    st.step(x);
    const double en = st.energy(x);
    lo = std::min(lo, en);
    hi = std::max(hi, en);
  }
  CHECK((hi - lo) / (0.5 * (hi + lo)) < 1e-11);
}

TEST_CASE("history of a projected state makes the first energy sample exact")
{
  Setup s(square_mesh(2, 1, 0.0, 1), 2);
  const double tau = stable_timestep(s.mesh, 2, s.mat);
  Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau);
  FieldState x = project_state(st, mode_e, mode_h, 0.3);
  const double e0 = st.energy(x);
  for (int k = 0; k < 10; ++k)
  {
    st.step(x);
    CHECK(std::abs(st.energy(x) - e0) < 1e-13 * e0);
  }
  // The history depends on e, h and hs only.
  FieldState y = project_state(st, mode_e, mode_h, 0.3);
  const auto h_prev = y.h_prev, hs_prev = y.hs_prev;
  CHECK(rel_diff(hs_prev, std::vector<double>(hs_prev.size(), 0.0)) > 0.0);
  FieldState z = project_state(st, mode_e, mode_h, 0.3);
  z.h_prev.assign(z.h_prev.size(), 7.0);
  st.set_history(z);
  CHECK(rel_diff(z.h_prev, h_prev) < 1e-15);
  CHECK(rel_diff(z.hs_prev, hs_prev) < 1e-15);
}

TEST_CASE("cavity mode is propagated accurately")
{
  double prev_e = 0.0, prev_h = 0.0;
  for (int n : {4, 8})
  {
    Setup s(square_mesh(2, n, 0.0, 1), 3);
    const double tau = stable_timestep(s.mesh, 3, s.mat);
    Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau);
    FieldState x = project_state(st, mode_e, mode_h);
    const long steps = std::lround(0.5 / tau);
    for (long k = 0; k < steps; ++k)
    {
      st.step(x);
    }
    const double t = x.time;
    const VectorField ee = [t](const Vec3 &r) { return mode_e(r, t); };
    const VectorField hh = [t, tau](const Vec3 &r) { return mode_h(r, t + 0.5 * tau); };
    const double err_e = l2_error(s.mesh, s.ref, FieldKind::E, x.e, &ee);
    const double err_h = l2_error(s.mesh, s.ref, FieldKind::H, x.h, &hh);
    MESSAGE("n = " << n << " cavity errors " << err_e << " " << err_h);
    CHECK(err_e < 2e-3);
    CHECK(err_h < 2e-4);
    if (n == 8)
    {
      CHECK(prev_e / err_e > 6.0);
      CHECK(prev_h / err_h > 12.0);
    }
    prev_e = err_e;
    prev_h = err_h;
  }
}

TEST_CASE("auxiliary update on one layer element")
{
  Setup s(reference_mesh(2), 1);
  s.mesh.regions[0] = "xpml";
  const double sigma = 4.0, tau = 0.01;
  Stepper st(s.op, s.mat, element_pml_tensors(s.mesh, sigma), sigma, s.alpha, tau);
  REQUIRE(st.has_pml());
  const VectorField one = [](const Vec3 &) { return Vec3{1.0, 0.0, 0.0}; };
  FieldState x = st.zero_state();
  x.e = project_field(s.mesh, s.ref, FieldKind::E, one);
  const double e0 = x.e[0];
  CHECK(std::abs(e0 - 1.0 / std::sqrt(2.0)) < 1e-14);
  st.step(x);
  // eta_xx = -sigma: trapezoidal growth factor, no curl for a constant field.
  const double g = (1.0 + 0.5 * tau * sigma) / (1.0 - 0.5 * tau * sigma);
  CHECK(std::abs(x.e[0] - g * e0) < 1e-14);
  const auto c = aux_coefficients(sigma, tau);
  CHECK(std::abs(x.p[0] - c.beta * tau * sigma * sigma * g * e0) < 1e-14);
  CHECK(x.p[1] == 0.0);
  for (std::size_t i = 2; i < x.p.size(); ++i)
  {
    CHECK(std::abs(x.p[i]) < 1e-14);
  }
}

TEST_CASE("layer absorbs a pulse and leaves the interior auxiliaries at zero")
{
  StructuredSpec spec;
  spec.box_min = {-0.6, -0.6, 0};
  spec.box_max = {0.6, 0.6, 0};
  spec.cells = {12, 12, 1};
  Mesh mesh = generate_structured(spec);
  StretchSpec ps;
  ps.dim = 2;
  ps.half_widths = {0.4, 0.4, 0};
  ps.outer_min = spec.box_min;
  ps.outer_max = spec.box_max;
  ps.sigma = 20.0;
  classify_regions(mesh, ps);
  Setup s(mesh, 2);
  const double tau = stable_timestep(s.mesh, 2, s.mat);
  Stepper st(s.op, s.mat, element_pml_tensors(s.mesh, ps.sigma), ps.sigma, s.alpha, tau);
  const TimeField bump = [](const Vec3 &x, double) {
    return Vec3{0.0, 0.0, std::exp(-(x[0] * x[0] + x[1] * x[1]) / 0.01)};
  };
  FieldState x = project_state(st, nullptr, bump);
  const double e_start = st.energy(x);
  while (x.time < 3.0)
  {
    st.step(x);
  }
  const FieldLayout &l = s.op.layout();
  bool zero_air = true, nonzero_layer = false;
  for (int el = 0; el < l.num_elements; ++el)
  {
    const bool air = s.mesh.regions[el] == "air";
    for (int i = 0; i < l.e_stride(); ++i)
    {
      const double v = x.p[l.e_offset(el) + i];
      zero_air = zero_air && (!air || v == 0.0);
      nonzero_layer = nonzero_layer || (!air && v != 0.0);
    }
    for (int i = 0; i < l.h_stride(); ++i)
    {
      zero_air = zero_air && (!air || x.q[l.h_offset(el) + i] == 0.0);
    }
  }
  CHECK(zero_air);
  CHECK(nonzero_layer);
  MESSAGE("energy ratio after absorption " << st.energy(x) / e_start);
  CHECK(st.energy(x) < 1e-2 * e_start);
}

TEST_CASE("instability is reported with the step index")
{
  Setup s(square_mesh(2, 2, 0.0, 1), 2);
  const double tau = 40.0 * stable_timestep(s.mesh, 2, s.mat);
  Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau);
  st.check_interval = 50;
  std::mt19937 rng(1);
  FieldState x = st.zero_state();
  randomize(x.e, rng);
  long failed = -1;
  try
  {
    for (int k = 0; k < 100000; ++k)
    {
      st.step(x);
    }
  }
  catch (const NumericalInstability &err)
  {
    failed = err.step();
  }
  CHECK(failed > 0);
  CHECK(failed % 50 == 0);
}

TEST_CASE("run cadence and determinism")
{
  Setup s(square_mesh(2, 2, 0.0, 1), 1);
  const double tau = stable_timestep(s.mesh, 1, s.mat);
  Stepper st(s.op, s.mat, {}, 0.0, s.alpha, tau);
  auto go = [&](long steps, long cadence) {
    FieldState x = project_state(st, mode_e, mode_h);
    std::vector<double> samples;
    run(st, x, steps, cadence, [&](const FieldState &f) { samples.push_back(f.h[0]); });
    return samples;
  };
  CHECK(go(100, 10).size() == 11);
  CHECK(go(0, 10).size() == 1);
  CHECK(go(100, 10) == go(100, 10));
}

TEST_CASE("sources and envelopes")
{
  Envelope g;
  g.t0 = 3.0;
  g.width = 0.5;
  CHECK(g(3.0) == 1.0);
  CHECK(std::abs(g(3.5) - std::exp(-1.0)) < 1e-15);
  CHECK_NOTHROW(g.validate());
  g.t0 = 1.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);

  Envelope s;
  s.kind = EnvelopeKind::Sine;
  s.omega = 2.0;
  s.ramp = 1.0;
  CHECK(s(0.0) == 0.0);
  CHECK(std::abs(s(0.5) - 0.5 * std::sin(1.0)) < 1e-15);
  CHECK(std::abs(s(2.0) - std::sin(4.0)) < 1e-15);

  SourceSpec src;
  src.tag = "port";
  src.polarization = {0.0, 2.0, 0.0};
  src.envelope.t0 = 6.0;
  src.envelope.width = 1.0;
  src.direction = {1.0, 0.0, 0.0};
  const Vec3 v = src.field({1.5, 0.0, 0.0}, 7.5);
  CHECK(std::abs(v[1] - 2.0) < 1e-15);
  CHECK_NOTHROW(src.validate());
  src.direction = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(src.validate(), ConfigError);

  std::vector<SourceSpec> two(2, src);
  CHECK_THROWS_AS(incident_tag_map(two), ConfigError);
  two[1].tag = "other";
  CHECK(incident_tag_map(two).at("other") == 1);
}
