// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/pml.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dgtd
{

namespace
{

constexpr const char *kAxisNames = "xyz";

bool ends_with_pml(const std::string &label)
{
  return label.size() > 3 && label.compare(label.size() - 3, 3, "pml") == 0;
}

/// Parses "xzpml" into its axis set; false if the label is not well formed.
bool parse_axes(const std::string &label, std::array<bool, 3> &axes)
{
  axes = {false, false, false};
  if (!ends_with_pml(label))
  {
    return false;
  }
  int last = -1;
  for (std::size_t i = 0; i + 3 < label.size(); ++i)
  {
    const int a = label[i] - 'x';
    if (a < 0 || a > 2 || a <= last)
    {
      return false;
    }
    axes[a] = true;
    last = a;
  }
  return true;
}

}  // namespace

bool StretchSpec::stretched(int axis) const
{
  const double w = half_widths[axis];
  return axis < dim && w > 0.0 && std::isfinite(w);
}

void StretchSpec::validate() const
{
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
  {
    throw ConfigError("pml sigma must be finite and non-negative");
  }
  for (int a = 0; a < dim; ++a)
  {
    if (!stretched(a))
    {
      continue;
    }
    if (!(outer_min[a] < -half_widths[a] && outer_max[a] > half_widths[a]))
    {
      std::ostringstream msg;
      msg << "outer box must strictly contain the interior box along " << kAxisNames[a];
      throw ConfigError(msg.str());
    }
  }
}

bool PmlTensors::active() const
{
  for (int a = 0; a < 3; ++a)
  {
    if (eta[a] != 0.0 || xi[a] != 0.0)
    {
      return true;
    }
  }
  return false;
}

bool is_pml_label(const std::string &label)
{
  std::array<bool, 3> axes{};
  return parse_axes(label, axes);
}

std::string pml_label(const std::array<bool, 3> &axes)
{
  std::string label;
  for (int a = 0; a < 3; ++a)
  {
    if (axes[a])
    {
      label += kAxisNames[a];
    }
  }
  return label.empty() ? std::string("air") : label + "pml";
}

void classify_regions(Mesh &mesh, const StretchSpec &spec)
{
  spec.validate();
  const double tol = 1e-12;
  for (int e = 0; e < mesh.num_elements(); ++e)
  {
    const auto &el = mesh.elements[e];
    std::array<bool, 3> axes{false, false, false};
    bool any = false;
    for (int a = 0; a < spec.dim; ++a)
    {
      if (!spec.stretched(a))
      {
        continue;
      }
      const double w = spec.half_widths[a];
      double c = 0.0;
      bool inside = false;
      bool outside = false;
      for (int v = 0; v <= mesh.dim; ++v)
      {
        const double x = mesh.vertices[el[v]][a];
        c += x;
        inside = inside || std::abs(x) < w - tol;
        outside = outside || std::abs(x) > w + tol;
      }
      c /= mesh.dim + 1;
      if ((inside && outside) || std::abs(std::abs(c) - w) < tol)
      {
        std::ostringstream msg;
        msg << "element " << e << " crosses the layer interface " << kAxisNames[a] << " = +-" << w
            << "; the mesh must be aligned with the layer boxes";
        throw MeshError(msg.str());
      }
      axes[a] = std::abs(c) > w;
      any = any || axes[a];
    }
    if (any)
    {
      mesh.regions[e] = pml_label(axes);
    }
  }
}

PmlTensors pml_tensors(const std::string &label, double sigma)
{
  PmlTensors t;
  std::array<bool, 3> axes{};
  if (!parse_axes(label, axes))
  {
    if (ends_with_pml(label))
    {
      throw ConfigError("unknown layer region '" + label + "'");
    }
    return t;
  }
  const int count = int(axes[0]) + int(axes[1]) + int(axes[2]);
  const double s2 = sigma * sigma;
  for (int a = 0; a < 3; ++a)
  {
    switch (count)
    {
      case 1:
        t.eta[a] = axes[a] ? -sigma : sigma;
        t.xi[a] = axes[a] ? s2 : 0.0;
        break;
      case 2:
        t.eta[a] = axes[a] ? 0.0 : 2.0 * sigma;
        t.xi[a] = axes[a] ? 0.0 : s2;
        break;
      default:
        t.eta[a] = sigma;
        t.xi[a] = 0.0;
        break;
    }
  }
  return t;
}

std::vector<PmlTensors> element_pml_tensors(const Mesh &mesh, double sigma)
{
  std::vector<PmlTensors> out(mesh.regions.size());
  for (std::size_t e = 0; e < out.size(); ++e)
  {
    out[e] = pml_tensors(mesh.regions[e], sigma);
  }
  return out;
}

std::array<std::complex<double>, 3> stretched_tensor_freq(const std::string &label, double omega,
                                                          double sigma, const Vec3 &m)
{
  if (omega == 0.0)
  {
    throw InvalidArgument("stretched tensor needs a non-zero frequency");
  }
  std::array<bool, 3> axes{false, false, false};
  if (!parse_axes(label, axes) && ends_with_pml(label))
  {
    throw ConfigError("unknown layer region '" + label + "'");
  }
  std::array<std::complex<double>, 3> s;
  for (int a = 0; a < 3; ++a)
  {
    s[a] = {1.0, axes[a] ? sigma / omega : 0.0};
  }
  std::array<std::complex<double>, 3> out;
  for (int a = 0; a < 3; ++a)
  {
    out[a] = s[(a + 1) % 3] * s[(a + 2) % 3] / s[a] * m[a];
  }
  return out;
}

AuxCoefficients aux_coefficients(double sigma, double tau)
{
  const double half = 0.5 * sigma * tau;
  AuxCoefficients c;
  c.beta = 1.0 / (1.0 + half);
  c.gamma = (1.0 - half) * c.beta;
  return c;
}

}  // namespace dgtd
