// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/fields.hpp"

#include <algorithm>
#include <cmath>

#include "dgtd/refbasis.hpp"

namespace dgtd
{

namespace
{

struct Space
{
  const ModalBasis *basis;
  int comps;
};

Space space_of(const ReferenceElement &ref, FieldKind kind)
{
  if (kind == FieldKind::E)
  {
    return {&ref.e_basis(), ref.e_components()};
  }
  return {&ref.h_basis(), ref.h_components()};
}

QuadratureRule rule_for(const ReferenceElement &ref, FieldKind kind, int extra_order)
{
  const int degree = kind == FieldKind::E ? ref.degree() + 1 : ref.degree();
  const int order = std::clamp(2 * degree + extra_order, 1, kMaxQuadratureOrder);
  return simplex_quadrature(ref.dim(), order);
}

}  // namespace

std::vector<double> project_field(const Mesh &mesh, const ReferenceElement &ref, FieldKind kind,
                                  const VectorField &f, int extra_order)
{
  const Space s = space_of(ref, kind);
  const int nm = s.basis->size();
  const int d = ref.dim();
  const QuadratureRule rule = rule_for(ref, kind, extra_order);
  RowMatrix values(static_cast<int>(rule.size()), nm);
  for (int q = 0; q < static_cast<int>(rule.size()); ++q)
  {
    s.basis->evaluate(rule.points[q], std::span<double>(values.row(q).data(), nm));
  }
  std::vector<double> out(std::size_t(mesh.num_elements()) * nm * s.comps, 0.0);
  std::vector<Vec3> fq(rule.size());
  for (int el = 0; el < mesh.num_elements(); ++el)
  {
    const ElementGeometry g = element_geometry(mesh, el);
    for (int q = 0; q < static_cast<int>(rule.size()); ++q)
    {
      fq[q] = f(g.to_physical(rule.points[q]));
    }
    double *u = out.data() + std::size_t(el) * nm * s.comps;
    for (int m = 0; m < nm; ++m)
    {
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      for (int q = 0; q < static_cast<int>(rule.size()); ++q)
      {
        const double w = rule.weights[q] * values(q, m);
        acc += w * Eigen::Vector3d(fq[q][0], fq[q][1], fq[q][2]);
      }
      if (s.comps == 1)
      {
        u[m] = acc[2];
        continue;
      }
      const Eigen::Vector3d c = g.A.transpose() * acc;
      for (int k = 0; k < d; ++k)
      {
        u[m * s.comps + k] = c[k];
      }
    }
  }
  return out;
}

Vec3 evaluate_field(const ReferenceElement &ref, FieldKind kind, std::span<const double> coeffs,
                    int element, const ElementGeometry &g, const Vec3 &r_hat,
                    std::vector<double> &scratch)
{
  const Space s = space_of(ref, kind);
  const int nm = s.basis->size();
  if (scratch.size() < std::size_t(nm))
  {
    scratch.resize(nm);
  }
  s.basis->evaluate(r_hat, std::span<double>(scratch.data(), nm));
  const double *u = coeffs.data() + std::size_t(element) * nm * s.comps;
  if (s.comps == 1)
  {
    double v = 0.0;
    for (int m = 0; m < nm; ++m)
    {
      v += u[m] * scratch[m];
    }
    return {0.0, 0.0, v};
  }
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int m = 0; m < nm; ++m)
  {
    for (int k = 0; k < s.comps; ++k)
    {
      c[k] += u[m * s.comps + k] * scratch[m];
    }
  }
  const Eigen::Vector3d v = g.inv_t * c;
  return {v[0], v[1], v[2]};
}

Vec3 evaluate_field(const Mesh &mesh, const ReferenceElement &ref, FieldKind kind,
                    std::span<const double> coeffs, int element, const Vec3 &r_hat)
{
  std::vector<double> scratch;
  return evaluate_field(ref, kind, coeffs, element, element_geometry(mesh, element), r_hat,
                        scratch);
}

double l2_error(const Mesh &mesh, const ReferenceElement &ref, FieldKind kind,
                std::span<const double> coeffs, const VectorField *f, int extra_order)
{
  const QuadratureRule rule = rule_for(ref, kind, extra_order);
  const Space s = space_of(ref, kind);
  if (coeffs.size() != std::size_t(mesh.num_elements()) * s.basis->size() * s.comps)
  {
    throw InvalidArgument("l2_error: coefficient vector does not match the layout");
  }
  std::vector<double> scratch;
  double sum = 0.0;
  for (int el = 0; el < mesh.num_elements(); ++el)
  {
    const ElementGeometry g = element_geometry(mesh, el);
    double local = 0.0;
    for (int q = 0; q < static_cast<int>(rule.size()); ++q)
    {
      Vec3 v = evaluate_field(ref, kind, coeffs, el, g, rule.points[q], scratch);
      if (f)
      {
        Vec3 exact = (*f)(g.to_physical(rule.points[q]));
        if (s.comps == 1)
        {
          exact = {0.0, 0.0, exact[2]};
        }
        v = v - exact;
      }
      local += rule.weights[q] * dot(v, v);
    }
    sum += std::abs(g.det) * local;
  }
  return std::sqrt(sum);
}

}  // namespace dgtd
