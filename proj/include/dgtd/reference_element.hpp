// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_REFERENCE_ELEMENT_HPP
#define DGTD_REFERENCE_ELEMENT_HPP

#include <array>
#include <vector>

#include "dgtd/common.hpp"
#include "dgtd/refbasis.hpp"

namespace dgtd
{

/// Trace data of one local facet seen through one vertex permutation.
///
/// A facet is parametrized by s in the unit (d-1)-simplex through its
/// canonical vertex order (the owner element's order). perm[k] says which of
/// this element's local facet vertices sits at canonical vertex k. Tangents
/// are the reference edge vectors from canonical vertex 0 to vertices 1..d-1;
/// for an affine element they map to the same physical edge vectors from
/// either side of the facet, which is what makes every facet coupling
/// geometry-free.
struct FacetTable
{
  int facet = 0;
  int perm = 0;
  /// +1 when t1 x t2 (3D) or z x n (2D) agrees with the outward normal.
  double orientation = 1.0;
  std::array<Vec3, 2> tangents{};
  std::vector<Vec3> points;
  RowMatrix e_values;  // facet points x e scalar modes
  RowMatrix h_values;  // facet points x h scalar modes
};

/// Geometry-independent tables on the reference triangle or tetrahedron.
///
/// The electric field uses degree p + 1 and the magnetic field degree p, both
/// as vector fields mapped covariantly; in 2D the magnetic field is the
/// scalar out-of-plane component. Degree-of-freedom index inside an element
/// is mode * components + component.
class ReferenceElement
{
public:
  ReferenceElement(int dim, int degree, int quadrature_bump = 0);

  int dim() const { return dim_; }
  int degree() const { return degree_; }

  int e_modes() const { return e_basis_.size(); }
  int h_modes() const { return h_basis_.size(); }
  int facet_modes() const { return facet_basis_.size(); }
  int e_components() const { return dim_; }
  int h_components() const { return dim_ == 3 ? 3 : 1; }
  int hs_components() const { return dim_ - 1; }
  int e_dofs() const { return e_modes() * e_components(); }
  int h_dofs() const { return h_modes() * h_components(); }
  int hs_dofs() const { return facet_modes() * hs_components(); }

  const ModalBasis &e_basis() const { return e_basis_; }
  const ModalBasis &h_basis() const { return h_basis_; }
  const ModalBasis &facet_basis() const { return facet_basis_; }

  const QuadratureRule &volume_rule() const { return volume_rule_; }
  const QuadratureRule &facet_rule() const { return facet_rule_; }

  const RowMatrix &e_volume_values() const { return e_vol_values_; }
  const RowMatrix &h_volume_values() const { return h_vol_values_; }
  /// Gradient component c of the e modes at volume points.
  const RowMatrix &e_volume_gradient(int c) const { return e_vol_grads_[c]; }
  /// Facet modal basis at facet quadrature points (facet points x modes).
  const RowMatrix &facet_basis_values() const { return facet_values_; }

  /// Reference curl matrix: entry (h dof, e dof) = (curl e mode, h mode) on the
  /// reference simplex.
  const RowMatrix &curl_matrix() const { return curl_; }

  int num_facets() const { return dim_ + 1; }
  static int num_permutations(int dim) { return dim == 2 ? 2 : 6; }
  static const std::vector<std::array<int, 3>> &permutations(int dim);
  /// Permutation id of a vertex reordering; -1 when not a permutation.
  static int permutation_id(int dim, const std::array<int, 3> &perm);

  const FacetTable &facet_table(int facet, int perm) const
  {
    return facet_tables_[facet * num_permutations(dim_) + perm];
  }

  static Vec3 reference_vertex(int v);
  /// Local vertices of facet f (the facet opposite vertex f), ascending.
  static std::array<int, 3> facet_vertices(int dim, int facet);
  static Vec3 reference_normal(int dim, int facet);

  /// Reference block of the facet form (trial e x n_test, test h) where the
  /// trial field lives on the element described by `trial` and the test field
  /// and normal on the element described by `test`. Rows are h dofs, columns
  /// e dofs.
  RowMatrix flux_matrix(const FacetTable &test, const FacetTable &trial) const;

  /// Reference block of the facet form (h_s x n, test e): rows e dofs,
  /// columns facet dofs, where h_s is given by its covariant tangential
  /// components along the canonical facet edges.
  RowMatrix penalty_matrix(const FacetTable &test) const;

private:
  int dim_;
  int degree_;
  ModalBasis e_basis_;
  ModalBasis h_basis_;
  ModalBasis facet_basis_;
  QuadratureRule volume_rule_;
  QuadratureRule facet_rule_;
  RowMatrix e_vol_values_;
  RowMatrix h_vol_values_;
  std::array<RowMatrix, 3> e_vol_grads_;
  RowMatrix facet_values_;
  RowMatrix curl_;
  std::vector<FacetTable> facet_tables_;
};

/// Reference point of the facet parameter s seen from one facet table.
Vec3 facet_point(int dim, const FacetTable &table, const Vec3 &s);

}  // namespace dgtd

#endif  // DGTD_REFERENCE_ELEMENT_HPP
