// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_OPERATORS_HPP
#define DGTD_OPERATORS_HPP

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dgtd/common.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/reference_element.hpp"

namespace dgtd
{

/// Degree-of-freedom layout. e and h are stored element by element, facet
/// unknowns facet by facet; inside a block the index is mode * components +
/// component.
struct FieldLayout
{
  int dim = 2;
  int num_elements = 0;
  int num_facets = 0;
  int e_modes = 0, h_modes = 0, hs_modes = 0;
  int e_comps = 0, h_comps = 0, hs_comps = 0;

  FieldLayout() = default;
  FieldLayout(const Mesh &mesh, const ReferenceElement &ref);

  int e_stride() const { return e_modes * e_comps; }
  int h_stride() const { return h_modes * h_comps; }
  int hs_stride() const { return hs_modes * hs_comps; }
  std::size_t e_size() const { return std::size_t(num_elements) * e_stride(); }
  std::size_t h_size() const { return std::size_t(num_elements) * h_stride(); }
  std::size_t hs_size() const { return std::size_t(num_facets) * hs_stride(); }
  std::size_t e_offset(int element) const { return std::size_t(element) * e_stride(); }
  std::size_t h_offset(int element) const { return std::size_t(element) * h_stride(); }
  std::size_t hs_offset(int facet) const { return std::size_t(facet) * hs_stride(); }
};

enum class FieldKind
{
  E,
  H
};

/// Block-diagonal mass matrix: one small symmetric block per element (or per
/// facet), repeated across all scalar modes of that element.
struct MassBlocks
{
  int comps = 1;
  int modes = 1;
  std::vector<Mat3> blocks;
  std::vector<Mat3> inverses;

  std::size_t size() const { return blocks.size() * std::size_t(comps) * modes; }
};

/// Element blocks |A| A^{-1} M A^{-T} for a covariantly mapped vector field
/// (or |A| M_zz for the 2D out-of-plane h). tensors holds one symmetric
/// material tensor per element. With check_spd, a block that is not positive
/// definite raises InvalidArgument.
MassBlocks assemble_mass(const Mesh &mesh, const ReferenceElement &ref,
                         const std::vector<Mat3> &tensors, FieldKind kind, bool check_spd = true);

/// Facet blocks for the jump unknowns: (mu/alpha) times the facet mass in
/// tangential-component form, |t1 x t2| G^{-1} with G_kl = t_k . t_l (3D) or
/// |t| (2D). coefficient holds mu/alpha per facet.
MassBlocks assemble_facet_mass(const Mesh &mesh, const ReferenceElement &ref,
                               const std::vector<double> &coefficient);

/// Default penalty per facet: kappa (p+1)(p+d) max |dT|/|T| over the incident elements.
std::vector<double> penalty_parameters(const Mesh &mesh, int degree, double kappa);

void apply_mass(const MassBlocks &mass, std::span<const double> x, std::span<double> y);
void apply_inverse_mass(const MassBlocks &mass, std::span<const double> x, std::span<double> y);

enum class FacetKind
{
  Interior,
  Pec,
  Incident
};

/// Prescribed tangential incident field: (source id, physical point, time) -> e_inc.
using IncidentFunction = std::function<Vec3(int, const Vec3 &, double)>;

/// Matrix-free semi-discrete Maxwell operator with central fluxes and the
/// facet jump unknown h_s. The system is
///   M_eps de/dt = C h + C_F h_s,  M_mu dh/dt = -C^T e + f,
///   M_s dh_s/dt = -C_F^T e,
/// where every element block of C and C_F is a reference matrix. Boundary
/// facets whose tag is in incident_tags use the ghost e = e + 2 e_inc and
/// h = -h; all other tagged boundary facets are perfect conductors.
class MaxwellOperator
{
public:
  MaxwellOperator(const Mesh &mesh, const ReferenceElement &ref,
                  const std::map<std::string, int> &incident_tags = {}, int workers = 1);

  const FieldLayout &layout() const { return layout_; }
  const Mesh &mesh() const { return mesh_; }
  const ReferenceElement &reference() const { return ref_; }
  FacetKind facet_kind(int facet) const { return kinds_[facet]; }
  int workers() const { return workers_; }
  void set_workers(int workers) { workers_ = workers < 1 ? 1 : workers; }

  /// Volume terms: e_res += K^T h and h_res -= K e per element.
  void apply_curl(std::span<const double> e, std::span<const double> h, std::span<double> e_res,
                  std::span<double> h_res) const;

  /// Facet terms of C and -C^T, plus the incident-field data when incident is
  /// non-null (evaluated at time t).
  void apply_flux(std::span<const double> e, std::span<const double> h,
                  const IncidentFunction *incident, double t, std::span<double> e_res,
                  std::span<double> h_res) const;

  /// e_res += C_F h_s and hs_res -= C_F^T e.
  void apply_penalty(std::span<const double> e, std::span<const double> hs,
                     std::span<double> e_res, std::span<double> hs_res) const;

  /// out = C h + C_F h_s (overwritten).
  void e_rhs(std::span<const double> h, std::span<const double> hs, std::span<double> out) const;

  /// h_out = -C^T e + f(t), hs_out = -C_F^T e (overwritten).
  void h_rhs(std::span<const double> e, const IncidentFunction *incident, double t,
             std::span<double> h_out, std::span<double> hs_out) const;

  /// Physical canonical tangents of a facet (owner orientation).
  const std::array<Vec3, 2> &facet_tangents(int facet) const { return tangents_[facet]; }

private:
  void e_density(std::span<const double> h, std::span<const double> hs, bool with_h,
                 bool with_hs, std::vector<double> &density) const;
  void h_density(std::span<const double> e, bool with_e, const IncidentFunction *incident,
                 double t, std::vector<double> &density, std::span<double> hs_res) const;
  void gather(const std::vector<double> &e_dens, const std::vector<double> *h_dens,
              std::span<const double> e, std::span<const double> h, bool volume,
              std::span<double> e_res, std::span<double> h_res, bool overwrite) const;

  const Mesh &mesh_;
  const ReferenceElement &ref_;
  FieldLayout layout_;
  int workers_;
  int nq_ = 0;   // facet quadrature points
  int nc_ = 0;   // tangential components per facet point
  std::vector<FacetKind> kinds_;
  std::vector<int> source_;  // incident source id per facet, -1 otherwise
  std::vector<std::array<Vec3, 2>> tangents_;
  std::vector<std::vector<Vec3>> incident_points_;  // physical facet points, incident facets only
};

}  // namespace dgtd

#endif  // DGTD_OPERATORS_HPP
