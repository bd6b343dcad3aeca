// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_FIELDS_HPP
#define DGTD_FIELDS_HPP

#include <functional>
#include <span>
#include <vector>

#include "dgtd/common.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/operators.hpp"
#include "dgtd/reference_element.hpp"

namespace dgtd
{

using VectorField = std::function<Vec3(const Vec3 &)>;

/// Unit-weight L2 projection onto the covariant e or h space. For the 2D h
/// field only the z component of f is used. The quadrature is exact for
/// polynomials of degree 2 * degree + extra_order.
std::vector<double> project_field(const Mesh &mesh, const ReferenceElement &ref, FieldKind kind,
                                  const VectorField &f, int extra_order = 6);

/// Value of a discrete field at reference point r_hat of an element. The 2D h
/// field is returned as (0, 0, h_z).
Vec3 evaluate_field(const Mesh &mesh, const ReferenceElement &ref, FieldKind kind,
                    std::span<const double> coeffs, int element, const Vec3 &r_hat);

/// Same as evaluate_field with precomputed geometry and a scratch buffer
/// holding at least as many entries as the field has scalar modes.
Vec3 evaluate_field(const ReferenceElement &ref, FieldKind kind, std::span<const double> coeffs,
                    int element, const ElementGeometry &g, const Vec3 &r_hat,
                    std::vector<double> &scratch);

/// L2 norm of u_h - f over the mesh (f may be null for the norm of u_h).
double l2_error(const Mesh &mesh, const ReferenceElement &ref, FieldKind kind,
                std::span<const double> coeffs, const VectorField *f, int extra_order = 6);

}  // namespace dgtd

#endif  // DGTD_FIELDS_HPP
