// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/reference_element.hpp"

#include <algorithm>
#include <string>

namespace dgtd
{

namespace
{

RowMatrix tabulate(const ModalBasis &basis, const std::vector<Vec3> &points)
{
  RowMatrix out(points.size(), basis.size());
  std::vector<double> values(basis.size());
  for (std::size_t q = 0; q < points.size(); ++q)
  {
    basis.evaluate(points[q], values);
    for (int m = 0; m < basis.size(); ++m)
    {
      out(q, m) = values[m];
    }
  }
  return out;
}

// Levi-Civita symbol for indices in {0,1,2}.
double levi_civita(int a, int b, int c)
{
  return 0.5 * (a - b) * (b - c) * (c - a);
}

}  // namespace

const std::vector<std::array<int, 3>> &ReferenceElement::permutations(int dim)
{
  static const std::vector<std::array<int, 3>> two = {{0, 1, 0}, {1, 0, 0}};
  static const std::vector<std::array<int, 3>> three = [] {
    std::vector<std::array<int, 3>> out;
    std::array<int, 3> p{0, 1, 2};
    do
    {
      out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  return dim == 2 ? two : three;
}

int ReferenceElement::permutation_id(int dim, const std::array<int, 3> &perm)
{
  const auto &all = permutations(dim);
  for (std::size_t i = 0; i < all.size(); ++i)
  {
    bool same = true;
    for (int k = 0; k < dim; ++k)
    {
      same = same && all[i][k] == perm[k];
    }
    if (same)
    {
      return static_cast<int>(i);
    }
  }
  return -1;
}

Vec3 ReferenceElement::reference_vertex(int v)
{
  Vec3 out{0.0, 0.0, 0.0};
  if (v > 0)
  {
    out[v - 1] = 1.0;
  }
  return out;
}

std::array<int, 3> ReferenceElement::facet_vertices(int dim, int facet)
{
  std::array<int, 3> out{0, 0, 0};
  int k = 0;
  for (int v = 0; v <= dim; ++v)
  {
    if (v != facet)
    {
      out[k++] = v;
    }
  }
  return out;
}

Vec3 ReferenceElement::reference_normal(int dim, int facet)
{
  Vec3 n{0.0, 0.0, 0.0};
  if (facet == 0)
  {
    const double c = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < dim; ++i)
    {
      n[i] = c;
    }
  }
  else
  {
    n[facet - 1] = -1.0;
  }
  return n;
}

Vec3 facet_point(int dim, const FacetTable &table, const Vec3 &s)
{
  const auto lv = ReferenceElement::facet_vertices(dim, table.facet);
  const auto &perm = ReferenceElement::permutations(dim)[table.perm];
  Vec3 r = ReferenceElement::reference_vertex(lv[perm[0]]);
  for (int k = 0; k + 1 < dim; ++k)
  {
    r = r + s[k] * table.tangents[k];
  }
  return r;
}

ReferenceElement::ReferenceElement(int dim, int degree, int quadrature_bump)
    : dim_(dim), degree_(degree), e_basis_(dim, degree + 1), h_basis_(dim, degree),
      facet_basis_(dim - 1 > 0 ? dim - 1 : 1, degree)
{
  if (dim != 2 && dim != 3)
  {
    throw InvalidArgument("ReferenceElement: dimension must be 2 or 3, got " +
                          std::to_string(dim));
  }
  if (degree < 0)
  {
    throw InvalidArgument("ReferenceElement: negative degree");
  }
  if (quadrature_bump < 0)
  {
    throw InvalidArgument("ReferenceElement: negative quadrature bump");
  }
  // Every bilinear form pairs polynomials of total degree <= 2p + 2.
  const int order = 2 * (degree + 1) + 1 + quadrature_bump;
  volume_rule_ = simplex_quadrature(dim, order);
  facet_rule_ = simplex_quadrature(dim - 1, order);

  e_vol_values_ = tabulate(e_basis_, volume_rule_.points);
  h_vol_values_ = tabulate(h_basis_, volume_rule_.points);
  facet_values_ = tabulate(facet_basis_, facet_rule_.points);

  const int nq = static_cast<int>(volume_rule_.size());
  for (int c = 0; c < dim; ++c)
  {
    e_vol_grads_[c].resize(nq, e_modes());
  }
  {
    std::vector<double> values(e_modes());
    std::vector<Vec3> grads(e_modes());
    for (int q = 0; q < nq; ++q)
    {
      e_basis_.evaluate(volume_rule_.points[q], values, grads);
      for (int m = 0; m < e_modes(); ++m)
      {
        for (int c = 0; c < dim; ++c)
        {
          e_vol_grads_[c](q, m) = grads[m][c];
        }
      }
    }
  }

  // Reference curl matrix.
  curl_ = RowMatrix::Zero(h_dofs(), e_dofs());
  for (int q = 0; q < nq; ++q)
  {
    const double w = volume_rule_.weights[q];
    for (int l = 0; l < e_modes(); ++l)
    {
      const Vec3 g{e_vol_grads_[0](q, l), e_vol_grads_[1](q, l),
                   dim == 3 ? e_vol_grads_[2](q, l) : 0.0};
      for (int j = 0; j < dim; ++j)
      {
        const int col = l * dim + j;
        if (dim == 2)
        {
          // curl(phi e_x) = -d_y phi, curl(phi e_y) = d_x phi
          const double c = (j == 0) ? -g[1] : g[0];
          for (int m = 0; m < h_modes(); ++m)
          {
            curl_(m, col) += w * c * h_vol_values_(q, m);
          }
        }
        else
        {
          for (int a = 0; a < 3; ++a)
          {
            // (grad phi x e_j)_a = eps_{a b j} d_b phi
            double c = 0.0;
            for (int b = 0; b < 3; ++b)
            {
              c += levi_civita(a, b, j) * g[b];
            }
            if (c == 0.0)
            {
              continue;
            }
            for (int m = 0; m < h_modes(); ++m)
            {
              curl_(m * 3 + a, col) += w * c * h_vol_values_(q, m);
            }
          }
        }
      }
    }
  }

  // Facet trace tables for every (local facet, permutation).
  const int nperm = num_permutations(dim);
  facet_tables_.reserve((dim + 1) * nperm);
  for (int f = 0; f <= dim; ++f)
  {
    const auto lv = facet_vertices(dim, f);
    const Vec3 n = reference_normal(dim, f);
    for (int pi = 0; pi < nperm; ++pi)
    {
      const auto &perm = permutations(dim)[pi];
      FacetTable table;
      table.facet = f;
      table.perm = pi;
      const Vec3 v0 = reference_vertex(lv[perm[0]]);
      for (int k = 1; k < dim; ++k)
      {
        table.tangents[k - 1] = reference_vertex(lv[perm[k]]) - v0;
      }
      if (dim == 3)
      {
        table.orientation = dot(cross(table.tangents[0], table.tangents[1]), n) > 0.0 ? 1.0 : -1.0;
      }
      else
      {
        const Vec3 zxn{-n[1], n[0], 0.0};
        table.orientation = dot(table.tangents[0], zxn) > 0.0 ? 1.0 : -1.0;
      }
      for (const Vec3 &s : facet_rule_.points)
      {
        table.points.push_back(facet_point(dim, table, s));
      }
      table.e_values = tabulate(e_basis_, table.points);
      table.h_values = tabulate(h_basis_, table.points);
      facet_tables_.push_back(std::move(table));
    }
  }
}

RowMatrix ReferenceElement::flux_matrix(const FacetTable &test, const FacetTable &trial) const
{
  RowMatrix out = RowMatrix::Zero(h_dofs(), e_dofs());
  const int nq = static_cast<int>(facet_rule_.size());
  const double sigma = test.orientation;
  for (int q = 0; q < nq; ++q)
  {
    const double w = facet_rule_.weights[q];
    for (int l = 0; l < e_modes(); ++l)
    {
      for (int j = 0; j < dim_; ++j)
      {
        const double phi = trial.e_values(q, l);
        const int col = l * dim_ + j;
        if (dim_ == 2)
        {
          const double et = phi * trial.tangents[0][j];
          for (int m = 0; m < h_modes(); ++m)
          {
            out(m, col) += -sigma * w * et * test.h_values(q, m);
          }
        }
        else
        {
          const double e1 = phi * trial.tangents[0][j];
          const double e2 = phi * trial.tangents[1][j];
          for (int m = 0; m < h_modes(); ++m)
          {
            const double psi = test.h_values(q, m);
            for (int a = 0; a < 3; ++a)
            {
              const double p1 = psi * test.tangents[0][a];
              const double p2 = psi * test.tangents[1][a];
              out(m * 3 + a, col) += sigma * w * (e2 * p1 - e1 * p2);
            }
          }
        }
      }
    }
  }
  return out;
}

RowMatrix ReferenceElement::penalty_matrix(const FacetTable &test) const
{
  RowMatrix out = RowMatrix::Zero(e_dofs(), hs_dofs());
  const int nq = static_cast<int>(facet_rule_.size());
  const double sigma = test.orientation;
  const int nc = hs_components();
  for (int q = 0; q < nq; ++q)
  {
    const double w = facet_rule_.weights[q];
    for (int l = 0; l < e_modes(); ++l)
    {
      for (int j = 0; j < dim_; ++j)
      {
        const double phi = test.e_values(q, l);
        const int row = l * dim_ + j;
        for (int m = 0; m < facet_modes(); ++m)
        {
          const double chi = facet_values_(q, m);
          if (dim_ == 2)
          {
            out(row, m) += sigma * w * chi * phi * test.tangents[0][j];
          }
          else
          {
            const double f1 = phi * test.tangents[0][j];
            const double f2 = phi * test.tangents[1][j];
            // (chi x n) . phi = -sigma [(phi.t2)(chi.t1) - (phi.t1)(chi.t2)]
            out(row, m * nc + 0) += -sigma * w * f2 * chi;
            out(row, m * nc + 1) += sigma * w * f1 * chi;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace dgtd
