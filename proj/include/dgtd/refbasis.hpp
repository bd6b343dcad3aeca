// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_REFBASIS_HPP
#define DGTD_REFBASIS_HPP

#include <array>
#include <span>
#include <vector>

#include "dgtd/common.hpp"

namespace dgtd
{

/// Jacobi polynomial P_n^(alpha,beta)(w) by the three-term recurrence.
double jacobi_eval(int n, double alpha, double beta, double w);

/// Value and first derivative of P_n^(alpha,beta) at w.
std::array<double, 2> jacobi_eval_deriv(int n, double alpha, double beta, double w);

/// Gauss-Jacobi rule with n points for the weight (1-x)^alpha (1+x)^beta on [-1,1].
struct GaussJacobi
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussJacobi gauss_jacobi(int n, double alpha, double beta);

/// Quadrature on the unit right simplex of dimension 1, 2 or 3.
struct QuadratureRule
{
  int dim = 0;
  int order = 0;
  std::vector<Vec3> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

inline constexpr int kMaxQuadratureOrder = 61;

/// Collapsed (conical product) Gauss-Jacobi rule exact for total degree <= order.
/// Weights are positive and sum to the simplex measure 1/d!.
QuadratureRule simplex_quadrature(int dim, int order);

/// Measure of the unit right simplex: 1, 1/2, 1/6.
double simplex_measure(int dim);

/// Number of scalar modes of total degree <= p in dim variables.
inline int num_modes(int dim, int p)
{
  return p < 0 ? 0 : static_cast<int>(binomial(p + dim, dim));
}

/// Orthonormal hierarchical modal basis on the unit simplex (dim 1..3).
///
/// Modes are ordered by total degree, then lexicographically in the
/// collapsed-coordinate multi-index (i, j, k), so the first num_modes(dim, q)
/// functions span exactly the polynomials of degree <= q. Each mode is a
/// product of scaled Jacobi polynomials evaluated without division, so the
/// collapsed vertex of the Duffy map needs no special case.
class ModalBasis
{
public:
  ModalBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::array<int, 3> &multi_index(int mode) const { return indices_[mode]; }

  /// Evaluates every mode at a point. grads, when non-empty, receives
  /// size() gradients; only the first dim() components are set.
  void evaluate(const Vec3 &point, std::span<double> values, std::span<Vec3> grads = {}) const;

private:
  int dim_;
  int degree_;
  std::vector<std::array<int, 3>> indices_;
};

struct ModeValue
{
  double value = 0.0;
  Vec3 gradient{0.0, 0.0, 0.0};
};

/// Single-mode evaluation of the basis of degree p, with simplex membership
/// checked to 1e-12.
ModeValue dubiner_eval(int dim, int p, int mode, const Vec3 &point, bool want_gradient = false);

}  // namespace dgtd

#endif  // DGTD_REFBASIS_HPP
