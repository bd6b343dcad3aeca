// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_COMMON_HPP
#define DGTD_COMMON_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dgtd
{

/// Points and vectors are stored with three slots; 2D code leaves z at zero.
using Vec3 = std::array<double, 3>;

/// Small dense block (at most 3x3). Only the leading n x n part is meaningful.
using Mat3 = Eigen::Matrix3d;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Error hierarchy. The C API maps each class onto a status code.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class MeshError : public Error
{
public:
  using Error::Error;
};

class NumericalInstability : public Error
{
public:
  NumericalInstability(const std::string &what, long step) : Error(what), step_(step) {}
  long step() const { return step_; }

private:
  long step_;
};

class IoError : public Error
{
public:
  using Error::Error;
};

inline Vec3 operator+(const Vec3 &a, const Vec3 &b)
{
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec3 operator-(const Vec3 &a, const Vec3 &b)
{
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec3 operator*(double s, const Vec3 &a)
{
  return {s * a[0], s * a[1], s * a[2]};
}

inline double dot(const Vec3 &a, const Vec3 &b)
{
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross(const Vec3 &a, const Vec3 &b)
{
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3 &a)
{
  return std::sqrt(dot(a, a));
}

/// Binomial coefficient for the small arguments used in mode counting.
constexpr long binomial(int n, int k)
{
  if (k < 0 || k > n)
  {
    return 0;
  }
  long r = 1;
  for (int i = 1; i <= k; ++i)
  {
    r = r * (n - k + i) / i;
  }
  return r;
}

}  // namespace dgtd

#endif  // DGTD_COMMON_HPP
