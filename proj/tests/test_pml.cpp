// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <random>

#include "dgtd/mesh.hpp"
#include "dgtd/pml.hpp"

using namespace dgtd;

namespace
{

void check_diag(const Vec3 &got, const Vec3 &want)
{
  for (int a = 0; a < 3; ++a)
  {
    CHECK(got[a] == want[a]);
  }
}

std::map<std::string, int> count_regions(const Mesh &mesh)
{
  std::map<std::string, int> counts;
  for (const auto &r : mesh.regions)
  {
    ++counts[r];
  }
  return counts;
}

}  // namespace

TEST_CASE("region tables")
{
  auto t = pml_tensors("xpml", 5.0);
  check_diag(t.eta, {-5.0, 5.0, 5.0});
  check_diag(t.xi, {25.0, 0.0, 0.0});

  t = pml_tensors("air", 5.0);
  check_diag(t.eta, {0.0, 0.0, 0.0});
  check_diag(t.xi, {0.0, 0.0, 0.0});
  CHECK_FALSE(t.active());

  const double s = 1.7;
  const double s2 = s * s;
  check_diag(pml_tensors("ypml", s).eta, {s, -s, s});
  check_diag(pml_tensors("ypml", s).xi, {0.0, s2, 0.0});
  check_diag(pml_tensors("zpml", s).eta, {s, s, -s});
  check_diag(pml_tensors("zpml", s).xi, {0.0, 0.0, s2});
  check_diag(pml_tensors("xypml", s).eta, {0.0, 0.0, 2 * s});
  check_diag(pml_tensors("xypml", s).xi, {0.0, 0.0, s2});
  check_diag(pml_tensors("xzpml", s).eta, {0.0, 2 * s, 0.0});
  check_diag(pml_tensors("xzpml", s).xi, {0.0, s2, 0.0});
  check_diag(pml_tensors("yzpml", s).eta, {2 * s, 0.0, 0.0});
  check_diag(pml_tensors("yzpml", s).xi, {s2, 0.0, 0.0});
  check_diag(pml_tensors("xyzpml", s).eta, {s, s, s});
  check_diag(pml_tensors("xyzpml", s).xi, {0.0, 0.0, 0.0});

  for (const char *label : {"xpml", "ypml", "zpml", "xypml", "xzpml", "yzpml", "xyzpml"})
  {
    CHECK(is_pml_label(label));
    CHECK_FALSE(pml_tensors(label, 0.0).active());
  }
  CHECK_FALSE(is_pml_label("air"));
  CHECK_FALSE(pml_tensors("dielectric", 3.0).active());
  CHECK_THROWS_AS(pml_tensors("qpml", 1.0), ConfigError);
  CHECK_THROWS_AS(pml_tensors("yxpml", 1.0), ConfigError);
  CHECK(pml_label({true, false, true}) == "xzpml");
  CHECK(pml_label({false, false, false}) == "air");
}

TEST_CASE("stretched tensor")
{
  const Vec3 m{2.0, 3.0, 5.0};
  auto air = stretched_tensor_freq("air", 1.3, 4.0, m);
  for (int a = 0; a < 3; ++a)
  {
    CHECK(air[a] == std::complex<double>(m[a], 0.0));
  }
  const double sigma = 4.0, omega = 1.3;
  const std::complex<double> sx(1.0, sigma / omega);
  auto x = stretched_tensor_freq("xpml", omega, sigma, m);
  CHECK(std::abs(x[0] - m[0] / sx) < 1e-15 * m[0]);
  CHECK(std::abs(x[1] - m[1] * sx) < 1e-15 * std::abs(m[1] * sx));
  CHECK(std::abs(x[2] - m[2] * sx) < 1e-15 * std::abs(m[2] * sx));
  CHECK_THROWS_AS(stretched_tensor_freq("xpml", 0.0, sigma, m), InvalidArgument);
}

TEST_CASE("face regions decompose additively")
{
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uw(0.05, 40.0), um(0.5, 4.0), us(0.1, 10.0);
  const std::complex<double> i(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial)
  {
    const double omega = uw(rng) * (trial % 2 ? -1.0 : 1.0);
    const double sigma = us(rng);
    const Vec3 m{um(rng), um(rng), um(rng)};
    for (const char *label : {"xpml", "ypml", "zpml"})
    {
      const auto mt = stretched_tensor_freq(label, omega, sigma, m);
      const auto t = pml_tensors(label, sigma);
      for (int a = 0; a < 3; ++a)
      {
        const auto lhs = -i * omega * mt[a];
        const auto rhs = -i * omega * m[a] + t.eta[a] * m[a] + t.xi[a] * m[a] / (sigma - i * omega);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("trapezoidal auxiliary update is second order")
{
  const double sigma = 3.0, f = 2.0, T = 1.0;
  double err[3];
  for (int level = 0; level < 3; ++level)
  {
    const int n = 10 << level;
    const double tau = T / n;
    const auto c = aux_coefficients(sigma, tau);
    double p = 0.0;
    for (int k = 0; k < n; ++k)
    {
      p = c.gamma * p + c.beta * tau * f;
    }
    err[level] = std::abs(p - f / sigma * (1.0 - std::exp(-sigma * T)));
  }
  CHECK(err[0] / err[1] >= 3.8);
  CHECK(err[1] / err[2] >= 3.8);

  auto c = aux_coefficients(0.0, 0.1);
  CHECK(c.beta == 1.0);
  CHECK(c.gamma == 1.0);
}

TEST_CASE("classification 2D")
{
  StructuredSpec s;
  s.dim = 2;
  s.box_min = {-0.6, -0.6, 0.0};
  s.box_max = {0.6, 0.6, 0.0};
  s.cells = {12, 12, 1};
  Mesh mesh = generate_structured(s);

  StretchSpec p;
  p.dim = 2;
  p.half_widths = {0.5, 0.5, 0.0};
  p.outer_min = s.box_min;
  p.outer_max = s.box_max;
  p.sigma = 5.0;
  classify_regions(mesh, p);
  auto counts = count_regions(mesh);
  CHECK(counts["air"] == 200);
  CHECK(counts["xpml"] == 40);
  CHECK(counts["ypml"] == 40);
  CHECK(counts["xypml"] == 8);
  CHECK(counts.size() == 4);

  // Deterministic: classifying again changes nothing.
  const auto before = mesh.regions;
  classify_regions(mesh, p);
  CHECK(mesh.regions == before);

  // Only x stretched.
  Mesh m2 = generate_structured(s);
  p.half_widths = {0.5, 0.0, 0.0};
  classify_regions(m2, p);
  counts = count_regions(m2);
  CHECK(counts["air"] == 240);
  CHECK(counts["xpml"] == 48);

  // Interface not aligned with cells.
  s.cells = {5, 5, 1};
  Mesh m3 = generate_structured(s);
  p.half_widths = {0.5, 0.5, 0.0};
  CHECK_THROWS_AS(classify_regions(m3, p), MeshError);

  p.outer_max = {0.5, 0.6, 0.0};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.outer_max = s.box_max;
  p.sigma = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("classification 3D")
{
  StructuredSpec s;
  s.dim = 3;
  s.box_min = {-0.6, -0.6, -0.6};
  s.box_max = {0.6, 0.6, 0.6};
  s.cells = {6, 6, 6};
  Mesh mesh = generate_structured(s);
  StretchSpec p;
  p.dim = 3;
  p.half_widths = {0.4, 0.4, 0.4};
  p.outer_min = s.box_min;
  p.outer_max = s.box_max;
  p.sigma = 1.0;
  classify_regions(mesh, p);
  auto counts = count_regions(mesh);
  CHECK(counts["air"] == 4 * 4 * 4 * 6);
  CHECK(counts["xyzpml"] == 8 * 6);
  for (const char *face : {"xpml", "ypml", "zpml"})
  {
    CHECK(counts[face] == 2 * 16 * 6);
  }
  for (const char *edge : {"xypml", "xzpml", "yzpml"})
  {
    CHECK(counts[edge] == 4 * 4 * 6);
  }
  // Spot check: an element near (0.5, 0, 0) is in the x face layer.
  for (int e = 0; e < mesh.num_elements(); ++e)
  {
    const auto g = element_geometry(mesh, e);
    if (g.centroid[0] > 0.4 && std::abs(g.centroid[1]) < 0.4 && std::abs(g.centroid[2]) < 0.4)
    {
      CHECK(mesh.regions[e] == "xpml");
    }
  }
  const auto tensors = element_pml_tensors(mesh, 1.0);
  CHECK(tensors.size() == mesh.regions.size());
}
