// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_PML_HPP
#define DGTD_PML_HPP

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "dgtd/common.hpp"
#include "dgtd/mesh.hpp"

namespace dgtd
{

/// Cartesian layer around the box |x| < x*, |y| < y*, |z| < z*. A half-width
/// that is not positive (or infinite) leaves that axis unstretched.
struct StretchSpec
{
  int dim = 2;
  Vec3 half_widths{0.0, 0.0, 0.0};
  Vec3 outer_min{0.0, 0.0, 0.0};
  Vec3 outer_max{0.0, 0.0, 0.0};
  double sigma = 0.0;

  bool stretched(int axis) const;
  /// Throws ConfigError when the outer box does not contain the interior box
  /// or sigma is negative.
  void validate() const;
};

/// Diagonals of the auxiliary tensors eta and xi of one region.
struct PmlTensors
{
  Vec3 eta{0.0, 0.0, 0.0};
  Vec3 xi{0.0, 0.0, 0.0};

  bool active() const;
};

/// True for every label produced by classify_regions except the interior ones.
bool is_pml_label(const std::string &label);

/// Label for a set of stretched axes, e.g. {x, z} -> "xzpml".
std::string pml_label(const std::array<bool, 3> &axes);

/// Relabels elements whose centroid lies outside the interior box; elements
/// inside keep their region. Throws MeshError for elements crossing an
/// interface.
void classify_regions(Mesh &mesh, const StretchSpec &spec);

/// The region tables; interior labels give zero tensors. Throws ConfigError for
/// a label that looks like a layer but is not one of the known ones.
PmlTensors pml_tensors(const std::string &label, double sigma);

/// Per-element tensors from the region labels of a mesh.
std::vector<PmlTensors> element_pml_tensors(const Mesh &mesh, double sigma);

/// Frequency-domain stretched tensor diag((1+ia_y)(1+ia_z)/(1+ia_x), ...) M
/// with a = sigma/omega on the stretched axes of the label.
std::array<std::complex<double>, 3> stretched_tensor_freq(const std::string &label, double omega,
                                                          double sigma, const Vec3 &m);

/// Trapezoidal coefficients for dp/dt + sigma p = f: p+ = gamma p + beta tau f.
struct AuxCoefficients
{
  double beta = 1.0;
  double gamma = 1.0;
};

AuxCoefficients aux_coefficients(double sigma, double tau);

}  // namespace dgtd

#endif  // DGTD_PML_HPP
