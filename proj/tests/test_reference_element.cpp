// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "dgtd/reference_element.hpp"

using namespace dgtd;

namespace
{

double max_abs(const RowMatrix &m)
{
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool on_facet(int dim, int facet, const Vec3 &r)
{
  if (facet == 0)
  {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
    {
      s += r[i];
    }
    return std::abs(s - 1.0) < 1e-14;
  }
  return std::abs(r[facet - 1]) < 1e-14;
}

// Ratio of the physical facet measure to the parameter simplex measure.
double facet_jacobian(int dim, int facet)
{
  if (facet == 0)
  {
    return dim == 2 ? std::sqrt(2.0) : std::sqrt(3.0);
  }
  return 1.0;
}

}  // namespace

TEST_CASE("Reference curl matrix shape and gradient kernel")
{
  ReferenceElement r20(2, 0);
  CHECK(r20.curl_matrix().rows() == 1);
  CHECK(r20.curl_matrix().cols() == 6);
  ReferenceElement r30(3, 0);
  CHECK(r30.curl_matrix().rows() == 3);
  CHECK(r30.curl_matrix().cols() == 12);

  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int d = 2; d <= 3; ++d)
  {
    for (int p = 0; p <= 4; ++p)
    {
      ReferenceElement ref(d, p);
      // f is a random polynomial of degree p + 2 whose gradient lies in the e space.
      const ModalBasis fbasis(d, p + 2);
      std::vector<double> fc(fbasis.size());
      for (double &c : fc)
      {
        c = g(rng);
      }
      const QuadratureRule &rule = ref.volume_rule();
      Eigen::VectorXd u = Eigen::VectorXd::Zero(ref.e_dofs());
      std::vector<double> fv(fbasis.size());
      std::vector<Vec3> fg(fbasis.size());
      for (std::size_t q = 0; q < rule.size(); ++q)
      {
        fbasis.evaluate(rule.points[q], fv, fg);
        Vec3 grad{0, 0, 0};
        for (int m = 0; m < fbasis.size(); ++m)
        {
          grad = grad + fc[m] * fg[m];
        }
        for (int l = 0; l < ref.e_modes(); ++l)
        {
          for (int j = 0; j < d; ++j)
          {
            u[l * d + j] += rule.weights[q] * grad[j] * ref.e_volume_values()(q, l);
          }
        }
      }
      const Eigen::VectorXd ku = ref.curl_matrix() * u;
      INFO("d=" << d << " p=" << p);
      CHECK(ku.cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, u.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("Reference curl matrix matches direct evaluation")
{
  for (int d = 2; d <= 3; ++d)
  {
    const int p = 2;
    ReferenceElement ref(d, p);
    const QuadratureRule rule = simplex_quadrature(d, 2 * p + 6);
    RowMatrix k = RowMatrix::Zero(ref.h_dofs(), ref.e_dofs());
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      for (int l = 0; l < ref.e_modes(); ++l)
      {
        const ModeValue phi = dubiner_eval(d, p + 1, l, rule.points[q], true);
        for (int m = 0; m < ref.h_modes(); ++m)
        {
          const double psi = dubiner_eval(d, p, m, rule.points[q]).value;
          for (int j = 0; j < d; ++j)
          {
            Vec3 ej{0, 0, 0};
            ej[j] = 1.0;
            const Vec3 c = cross(phi.gradient, ej);
            if (d == 2)
            {
              k(m, l * 2 + j) += rule.weights[q] * c[2] * psi;
            }
            else
            {
              for (int a = 0; a < 3; ++a)
              {
                k(m * 3 + a, l * 3 + j) += rule.weights[q] * c[a] * psi;
              }
            }
          }
        }
      }
    }
    CHECK(max_abs(k - ref.curl_matrix()) < 1e-13);
  }
}

TEST_CASE("Facet tables")
{
  for (int d = 2; d <= 3; ++d)
  {
    ReferenceElement ref(d, 2);
    const int np = ReferenceElement::num_permutations(d);
    CHECK(static_cast<int>(ReferenceElement::permutations(d).size()) == np);
    for (int f = 0; f <= d; ++f)
    {
      const FacetTable &base = ref.facet_table(f, 0);
      for (int pi = 0; pi < np; ++pi)
      {
        const FacetTable &t = ref.facet_table(f, pi);
        CHECK(ReferenceElement::permutation_id(d, ReferenceElement::permutations(d)[pi]) == pi);
        for (const Vec3 &r : t.points)
        {
          CHECK(on_facet(d, f, r));
        }
        // odd permutations flip the orientation
        const auto &perm = ReferenceElement::permutations(d)[pi];
        int inversions = 0;
        for (int a = 0; a < d; ++a)
        {
          for (int b = a + 1; b < d; ++b)
          {
            inversions += perm[a] > perm[b];
          }
        }
        CHECK(t.orientation == base.orientation * (inversions % 2 ? -1.0 : 1.0));
      }
    }
  }
}

TEST_CASE("Reference facet flux and penalty blocks match normal-vector quadrature")
{
  for (int d = 2; d <= 3; ++d)
  {
    const int p = 2;
    ReferenceElement ref(d, p);
    const QuadratureRule &fr = ref.facet_rule();
    for (int f = 0; f <= d; ++f)
    {
      const Vec3 n = ReferenceElement::reference_normal(d, f);
      for (int pi = 0; pi < ReferenceElement::num_permutations(d); ++pi)
      {
        const FacetTable &t = ref.facet_table(f, pi);
        const double jac = facet_jacobian(d, f);
        RowMatrix flux = RowMatrix::Zero(ref.h_dofs(), ref.e_dofs());
        RowMatrix pen = RowMatrix::Zero(ref.e_dofs(), ref.hs_dofs());
        // dual tangent basis for a facet field given by tangential components
        std::array<Vec3, 2> dual{};
        if (d == 3)
        {
          const Vec3 &a = t.tangents[0], &b = t.tangents[1];
          const double g11 = dot(a, a), g12 = dot(a, b), g22 = dot(b, b);
          const double det = g11 * g22 - g12 * g12;
          dual[0] = (g22 / det) * a - (g12 / det) * b;
          dual[1] = (g11 / det) * b - (g12 / det) * a;
        }
        for (std::size_t q = 0; q < fr.size(); ++q)
        {
          const double w = fr.weights[q] * jac;
          const Vec3 &r = t.points[q];
          for (int l = 0; l < ref.e_modes(); ++l)
          {
            const double phi = dubiner_eval(d, p + 1, l, r).value;
            for (int j = 0; j < d; ++j)
            {
              Vec3 ej{0, 0, 0};
              ej[j] = phi;
              const Vec3 exn = cross(ej, n);
              for (int m = 0; m < ref.h_modes(); ++m)
              {
                const double psi = dubiner_eval(d, p, m, r).value;
                if (d == 2)
                {
                  flux(m, l * 2 + j) += w * exn[2] * psi;
                }
                else
                {
                  for (int a = 0; a < 3; ++a)
                  {
                    flux(m * 3 + a, l * 3 + j) += w * exn[a] * psi;
                  }
                }
              }
              for (int m = 0; m < ref.facet_modes(); ++m)
              {
                const double chi = ref.facet_basis_values()(q, m);
                if (d == 2)
                {
                  const Vec3 z{0, 0, chi};
                  pen(l * 2 + j, m) += w * dot(cross(z, n), ej);
                }
                else
                {
                  for (int k = 0; k < 2; ++k)
                  {
                    pen(l * 3 + j, m * 2 + k) += w * dot(cross(chi * dual[k], n), ej);
                  }
                }
              }
            }
          }
        }
        INFO("d=" << d << " f=" << f << " perm=" << pi);
        CHECK(max_abs(flux - ref.flux_matrix(t, t)) < 1e-13);
        CHECK(max_abs(pen - ref.penalty_matrix(t)) < 1e-13);
      }
    }
  }
}
