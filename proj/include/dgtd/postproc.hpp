// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_POSTPROC_HPP
#define DGTD_POSTPROC_HPP

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "dgtd/common.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/reference_element.hpp"
#include "dgtd/timeloop.hpp"

namespace dgtd
{

enum class ProbeQuantity
{
  E,
  H,
  Both
};

struct ProbeNode
{
  Vec3 x{0.0, 0.0, 0.0};
  int element = -1;
  Vec3 r_hat{0.0, 0.0, 0.0};
  double weight = 1.0;  // quadrature weight along a segment
};

/// A point probe, or a segment a -> b sampled at Gauss-Legendre nodes.
struct Probe
{
  std::string name;
  bool segment = false;
  Vec3 a{0.0, 0.0, 0.0};
  Vec3 b{0.0, 0.0, 0.0};
  int points = 0;               // segment nodes; 0 selects 2 (p + 1)
  Vec3 normal{1.0, 0.0, 0.0};   // port orientation for flux integrals
  ProbeQuantity quantity = ProbeQuantity::Both;
  std::vector<ProbeNode> nodes;  // filled by resolve_probe
};

/// Element containing x (lowest id on ties) and the reference coordinates,
/// or -1 when x lies outside the mesh.
int locate_point(const Mesh &mesh, const Vec3 &x, Vec3 &r_hat);

/// Places the nodes of a probe in the mesh. Throws ConfigError if a node is
/// outside.
void resolve_probe(const Mesh &mesh, int degree, Probe &probe);

/// Field values at the probe nodes. h is the mean of the two half levels
/// around the e level, so both refer to the same time.
struct ProbeSample
{
  std::vector<Vec3> e;
  std::vector<Vec3> h;
};

ProbeSample sample_fields(const Mesh &mesh, const ReferenceElement &ref, const FieldState &state,
                          const Probe &probe);

/// Column labels of a probe: <name>_<component> (point) or
/// <name>_<node>_<component> (segment); components ex, ey, ez, hx, hy, hz
/// restricted to those that exist in the dimension and quantity.
std::vector<std::string> probe_columns(const Probe &probe, int dim);
/// Values in the order of probe_columns.
std::vector<double> probe_row(const Probe &probe, int dim, const ProbeSample &sample);

/// Time series of all probes, one row per sample.
struct ProbeSeries
{
  std::vector<std::string> columns;  // without the leading "t"
  std::vector<double> times;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string &name) const;
};

/// Complex DFT X_k = sum_n x_n exp(-2 pi i k n / N), no normalization (the
/// inverse carries 1/N). omega holds the angular frequency of each bin,
/// negative above N/2.
struct Spectrum
{
  double dt = 1.0;
  std::vector<double> omega;
  std::vector<std::complex<double>> values;
};

/// Throws InvalidArgument for an empty series or a non-positive interval.
Spectrum dft_spectrum(std::span<const double> series, double dt, bool hann = false);
Spectrum dft_spectrum(std::span<const std::complex<double>> series, double dt, bool hann = false);
/// Inverse transform with 1/N normalization.
std::vector<std::complex<double>> inverse_dft(std::span<const std::complex<double>> values);

/// Time series of one port: per node, the field components over time.
struct PortSeries
{
  Vec3 normal{1.0, 0.0, 0.0};
  std::vector<double> weights;                       // per node
  std::vector<std::array<std::vector<double>, 3>> e;  // [node][component][sample]
  std::vector<std::array<std::vector<double>, 3>> h;
};

/// Extracts the port data of a segment probe from a recorded series.
PortSeries port_series(const Probe &probe, int dim, const ProbeSeries &series);

/// Per-bin flux integral sum_j w_j (E_j x H_j) . n of the transformed fields,
/// with conj(H_j) when conjugate is set.
std::vector<std::complex<double>> port_flux_spectrum(const PortSeries &port, double dt,
                                                     bool conjugate = false, bool hann = false);

/// |flux_b| / |flux_a| per bin; NaN where |flux_a| < 1e-14.
std::vector<double> s_parameter(std::span<const std::complex<double>> flux_a,
                                std::span<const std::complex<double>> flux_b);

/// Legacy ASCII VTK with element-mean e and h as cell data. With subsample,
/// a second file <path minus .vtk>_sub.vtk holds point values at p + 2 points
/// per axis of every element.
void write_vtk(const std::string &path, const Mesh &mesh, const ReferenceElement &ref,
               const FieldState &state, bool subsample = false);

/// CSV with header "t,<columns>" and %.16e values.
void write_csv(const std::string &path, const ProbeSeries &series);
ProbeSeries read_csv(const std::string &path);

}  // namespace dgtd

#endif  // DGTD_POSTPROC_HPP
