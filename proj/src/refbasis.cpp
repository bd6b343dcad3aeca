// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/refbasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dgtd
{

namespace
{

// Scaled Jacobi polynomials S_n(u, t) = t^n P_n^(alpha,beta)(u / t) for n = 0..nmax,
// with partial derivatives in u and t. The recurrence never divides by t, so
// t = 0 (the collapsed vertex) is an ordinary evaluation point.
void scaled_jacobi(int nmax, double alpha, double beta, double u, double t, double *s,
                   double *su, double *st)
{
  s[0] = 1.0;
  su[0] = 0.0;
  st[0] = 0.0;
  if (nmax == 0)
  {
    return;
  }
  s[1] = 0.5 * ((alpha + beta + 2.0) * u + (alpha - beta) * t);
  su[1] = 0.5 * (alpha + beta + 2.0);
  st[1] = 0.5 * (alpha - beta);
  for (int n = 2; n <= nmax; ++n)
  {
    const double ab = alpha + beta;
    const double c = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0);
    const double a = (2.0 * n + ab - 1.0) * (2.0 * n + ab) * (2.0 * n + ab - 2.0);
    const double b = (2.0 * n + ab - 1.0) * (alpha * alpha - beta * beta);
    const double d = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + ab);
    const double lin = a * u + b * t;
    s[n] = (lin * s[n - 1] - d * t * t * s[n - 2]) / c;
    su[n] = (a * s[n - 1] + lin * su[n - 1] - d * t * t * su[n - 2]) / c;
    st[n] = (b * s[n - 1] + lin * st[n - 1] - 2.0 * d * t * s[n - 2] - d * t * t * st[n - 2]) / c;
  }
}

}  // namespace

double jacobi_eval(int n, double alpha, double beta, double w)
{
  return jacobi_eval_deriv(n, alpha, beta, w)[0];
}

std::array<double, 2> jacobi_eval_deriv(int n, double alpha, double beta, double w)
{
  if (n < 0)
  {
    throw InvalidArgument("jacobi_eval: negative degree " + std::to_string(n));
  }
  if (alpha < 0.0 || beta < 0.0)
  {
    throw InvalidArgument("jacobi_eval: exponents must be nonnegative");
  }
  std::vector<double> s(n + 1), su(n + 1), st(n + 1);
  scaled_jacobi(n, alpha, beta, w, 1.0, s.data(), su.data(), st.data());
  return {s[n], su[n]};
}

GaussJacobi gauss_jacobi(int n, double alpha, double beta)
{
  if (n < 1)
  {
    throw InvalidArgument("gauss_jacobi: need at least one point");
  }
  // Golub-Welsch for starting values, then Newton polish on the recurrence.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k)
  {
    const double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    jac(k, k) = (k == 0) ? (beta - alpha) / (ab + 2.0)
                         : (beta * beta - alpha * alpha) / denom;
    if (k + 1 < n)
    {
      const double m = k + 1.0;
      const double num = 4.0 * m * (m + alpha) * (m + beta) * (m + ab);
      const double den = (2.0 * m + ab) * (2.0 * m + ab) * (2.0 * m + ab + 1.0) * (2.0 * m + ab - 1.0);
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  GaussJacobi rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double log_c = (ab + 1.0) * std::log(2.0) + std::lgamma(n + alpha + 1.0) +
                       std::lgamma(n + beta + 1.0) - std::lgamma(n + ab + 1.0) -
                       std::lgamma(n + 1.0);
  for (int k = 0; k < n; ++k)
  {
    double x = eig.eigenvalues()(k);
    for (int it = 0; it < 8; ++it)
    {
      const auto [p, dp] = jacobi_eval_deriv(n, alpha, beta, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17)
      {
        break;
      }
    }
    const double dp = jacobi_eval_deriv(n, alpha, beta, x)[1];
    rule.nodes[k] = x;
    rule.weights[k] = std::exp(log_c) / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double simplex_measure(int dim)
{
  switch (dim)
  {
    case 1:
      return 1.0;
    case 2:
      return 0.5;
    case 3:
      return 1.0 / 6.0;
    default:
      throw InvalidArgument("simplex_measure: dimension must be 1, 2 or 3");
  }
}

QuadratureRule simplex_quadrature(int dim, int order)
{
  if (dim < 1 || dim > 3)
  {
    throw InvalidArgument("simplex_quadrature: dimension must be 1, 2 or 3");
  }
  if (order < 0 || order > kMaxQuadratureOrder)
  {
    throw InvalidArgument("simplex_quadrature: order " + std::to_string(order) +
                          " outside supported range [0, " +
                          std::to_string(kMaxQuadratureOrder) + "]");
  }
  const int n = order / 2 + 1;
  QuadratureRule rule;
  rule.dim = dim;
  rule.order = order;
  const GaussJacobi ga = gauss_jacobi(n, 0.0, 0.0);
  if (dim == 1)
  {
    for (int i = 0; i < n; ++i)
    {
      rule.points.push_back({0.5 * (1.0 + ga.nodes[i]), 0.0, 0.0});
      rule.weights.push_back(0.5 * ga.weights[i]);
    }
    return rule;
  }
  const GaussJacobi gb = gauss_jacobi(n, 1.0, 0.0);
  if (dim == 2)
  {
    for (int i = 0; i < n; ++i)
    {
      for (int j = 0; j < n; ++j)
      {
        const double a = ga.nodes[i], b = gb.nodes[j];
        rule.points.push_back({0.25 * (1.0 + a) * (1.0 - b), 0.5 * (1.0 + b), 0.0});
        rule.weights.push_back(ga.weights[i] * gb.weights[j] / 8.0);
      }
    }
    return rule;
  }
  const GaussJacobi gc = gauss_jacobi(n, 2.0, 0.0);
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      for (int k = 0; k < n; ++k)
      {
        const double a = ga.nodes[i], b = gb.nodes[j], c = gc.nodes[k];
        rule.points.push_back({0.125 * (1.0 + a) * (1.0 - b) * (1.0 - c),
                               0.25 * (1.0 + b) * (1.0 - c), 0.5 * (1.0 + c)});
        rule.weights.push_back(ga.weights[i] * gb.weights[j] * gc.weights[k] / 64.0);
      }
    }
  }
  return rule;
}

ModalBasis::ModalBasis(int dim, int degree) : dim_(dim), degree_(degree)
{
  if (dim < 1 || dim > 3)
  {
    throw InvalidArgument("ModalBasis: dimension must be 1, 2 or 3");
  }
  if (degree < 0)
  {
    throw InvalidArgument("ModalBasis: negative degree");
  }
  for (int n = 0; n <= degree; ++n)
  {
    if (dim == 1)
    {
      indices_.push_back({n, 0, 0});
    }
    else if (dim == 2)
    {
      for (int i = 0; i <= n; ++i)
      {
        indices_.push_back({i, n - i, 0});
      }
    }
    else
    {
      for (int i = 0; i <= n; ++i)
      {
        for (int j = 0; j <= n - i; ++j)
        {
          indices_.push_back({i, j, n - i - j});
        }
      }
    }
  }
}

void ModalBasis::evaluate(const Vec3 &r, std::span<double> values, std::span<Vec3> grads) const
{
  const int p = degree_;
  const bool want_grad = !grads.empty();
  std::vector<double> s1(p + 1), s1u(p + 1), s1t(p + 1);
  std::vector<double> s2(p + 1), s2u(p + 1), s2t(p + 1);
  std::vector<double> s3(p + 1), s3u(p + 1), s3t(p + 1);

  if (dim_ == 1)
  {
    scaled_jacobi(p, 0.0, 0.0, 2.0 * r[0] - 1.0, 1.0, s1.data(), s1u.data(), s1t.data());
    for (int m = 0; m < size(); ++m)
    {
      const int i = indices_[m][0];
      const double c = std::sqrt(2.0 * i + 1.0);
      values[m] = c * s1[i];
      if (want_grad)
      {
        grads[m] = {2.0 * c * s1u[i], 0.0, 0.0};
      }
    }
    return;
  }

  if (dim_ == 2)
  {
    const double x = r[0], y = r[1];
    scaled_jacobi(p, 0.0, 0.0, 2.0 * x + y - 1.0, 1.0 - y, s1.data(), s1u.data(), s1t.data());
    for (int mode = 0; mode < size(); ++mode)
    {
      const auto [i, j, k] = indices_[mode];
      (void)k;
      scaled_jacobi(j, 2.0 * i + 1.0, 0.0, 2.0 * y - 1.0, 1.0, s2.data(), s2u.data(), s2t.data());
      const double c = std::sqrt(2.0 * (2.0 * i + 1.0) * (i + j + 1.0));
      values[mode] = c * s1[i] * s2[j];
      if (want_grad)
      {
        const double dx = 2.0 * s1u[i] * s2[j];
        const double dy = (s1u[i] - s1t[i]) * s2[j] + s1[i] * 2.0 * s2u[j];
        grads[mode] = {c * dx, c * dy, 0.0};
      }
    }
    return;
  }

  const double x = r[0], y = r[1], z = r[2];
  scaled_jacobi(p, 0.0, 0.0, 2.0 * x + y + z - 1.0, 1.0 - y - z, s1.data(), s1u.data(),
                s1t.data());
  for (int mode = 0; mode < size(); ++mode)
  {
    const auto [i, j, k] = indices_[mode];
    scaled_jacobi(j, 2.0 * i + 1.0, 0.0, 2.0 * y + z - 1.0, 1.0 - z, s2.data(), s2u.data(),
                  s2t.data());
    scaled_jacobi(k, 2.0 * i + 2.0 * j + 2.0, 0.0, 2.0 * z - 1.0, 1.0, s3.data(), s3u.data(),
                  s3t.data());
    const double c =
        std::sqrt(2.0 * (2.0 * i + 1.0) * (i + j + 1.0) * (2.0 * i + 2.0 * j + 2.0 * k + 3.0));
    const double f1 = s1[i], f2 = s2[j], f3 = s3[k];
    values[mode] = c * f1 * f2 * f3;
    if (want_grad)
    {
      const double f1x = 2.0 * s1u[i];
      const double f1y = s1u[i] - s1t[i];  // also d/dz
      const double f2y = 2.0 * s2u[j];
      const double f2z = s2u[j] - s2t[j];
      const double f3z = 2.0 * s3u[k];
      grads[mode] = {c * f1x * f2 * f3, c * (f1y * f2 + f1 * f2y) * f3,
                     c * (f1y * f2 * f3 + f1 * f2z * f3 + f1 * f2 * f3z)};
    }
  }
}

ModeValue dubiner_eval(int dim, int p, int mode, const Vec3 &point, bool want_gradient)
{
  const ModalBasis basis(dim, p);
  if (mode < 0 || mode >= basis.size())
  {
    throw InvalidArgument("dubiner_eval: mode " + std::to_string(mode) + " out of range [0, " +
                          std::to_string(basis.size()) + ")");
  }
  constexpr double tol = 1e-12;
  double sum = 0.0;
  for (int c = 0; c < dim; ++c)
  {
    if (point[c] < -tol)
    {
      throw InvalidArgument("dubiner_eval: point outside the reference simplex");
    }
    sum += point[c];
  }
  if (sum > 1.0 + tol)
  {
    throw InvalidArgument("dubiner_eval: point outside the reference simplex");
  }
  std::vector<double> values(basis.size());
  std::vector<Vec3> grads(want_gradient ? basis.size() : 0);
  basis.evaluate(point, values, grads);
  ModeValue out;
  out.value = values[mode];
  if (want_gradient)
  {
    out.gradient = grads[mode];
  }
  return out;
}

}  // namespace dgtd
