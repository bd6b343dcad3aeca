// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/postproc.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "dgtd/fields.hpp"
#include "dgtd/refbasis.hpp"

namespace dgtd
{

namespace
{

constexpr double kLocateTol = 1e-10;

bool inside_reference(const Vec3 &r, int dim, double tol)
{
  double sum = 0.0;
  for (int k = 0; k < dim; ++k)
  {
    if (r[k] < -tol)
    {
      return false;
    }
    sum += r[k];
  }
  return sum <= 1.0 + tol;
}

struct Component
{
  const char *label;
  bool magnetic;
  int axis;
};

std::vector<Component> components(int dim, ProbeQuantity q)
{
  std::vector<Component> out;
  const bool e = q != ProbeQuantity::H;
  const bool h = q != ProbeQuantity::E;
  if (e)
  {
    out.push_back({"ex", false, 0});
    out.push_back({"ey", false, 1});
    if (dim == 3)
    {
      out.push_back({"ez", false, 2});
    }
  }
  if (h)
  {
    if (dim == 3)
    {
      out.push_back({"hx", true, 0});
      out.push_back({"hy", true, 1});
    }
    out.push_back({"hz", true, 2});
  }
  return out;
}

std::string node_prefix(const Probe &probe, std::size_t node)
{
  return probe.segment ? probe.name + "_" + std::to_string(node) + "_" : probe.name + "_";
}

void fft(std::vector<std::complex<double>> &in, std::vector<std::complex<double>> &out, int sign)
{
  out.resize(in.size());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(in.size()),
                                    reinterpret_cast<fftw_complex *>(in.data()),
                                    reinterpret_cast<fftw_complex *>(out.data()), sign,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

void write_vector(std::ostream &os, const Vec3 &v)
{
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.16e %.16e %.16e\n", v[0], v[1], v[2]);
  os << buf;
}

Vec3 mean_value(const ReferenceElement &ref, FieldKind kind, std::span<const double> coeffs,
                int el, const ElementGeometry &g, double phi0)
{
  const int comps = kind == FieldKind::E ? ref.e_components() : ref.h_components();
  const int modes = kind == FieldKind::E ? ref.e_modes() : ref.h_modes();
  const double *u = coeffs.data() + std::size_t(el) * comps * modes;
  if (comps == 1)
  {
    return {0.0, 0.0, u[0] * phi0};
  }
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int k = 0; k < comps; ++k)
  {
    c[k] = u[k] * phi0;
  }
  const Eigen::Vector3d v = g.inv_t * c;
  return {v[0], v[1], v[2]};
}

std::ofstream open_out(const std::string &path)
{
  std::ofstream os(path);
  if (!os)
  {
    throw IoError("cannot open '" + path + "' for writing");
  }
  return os;
}

}  // namespace

int locate_point(const Mesh &mesh, const Vec3 &x, Vec3 &r_hat)
{
  for (int el = 0; el < mesh.num_elements(); ++el)
  {
    const ElementGeometry g = element_geometry(mesh, el);
    const Vec3 r = g.to_reference(x);
    if (!inside_reference(r, mesh.dim, kLocateTol))
    {
      continue;
    }
    const Vec3 back = g.to_physical(r);
    if (norm(back - x) > kLocateTol * std::max(1.0, norm(x)))
    {
      continue;
    }
    r_hat = r;
    return el;
  }
  return -1;
}

void resolve_probe(const Mesh &mesh, int degree, Probe &probe)
{
  probe.nodes.clear();
  std::vector<Vec3> points;
  std::vector<double> weights;
  if (probe.segment)
  {
    const int n = probe.points > 0 ? probe.points : 2 * (degree + 1);
    const GaussJacobi gl = gauss_jacobi(n, 0.0, 0.0);
    const double half = 0.5 * norm(probe.b - probe.a);
    if (!(half > 0.0))
    {
      throw ConfigError("probe '" + probe.name + "' has a zero-length segment");
    }
    for (int i = 0; i < n; ++i)
    {
      const double s = 0.5 * (gl.nodes[i] + 1.0);
      points.push_back(probe.a + s * (probe.b - probe.a));
      weights.push_back(gl.weights[i] * half);
    }
  }
  else
  {
    points.push_back(probe.a);
    weights.push_back(1.0);
  }
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    ProbeNode node;
    node.x = points[i];
    node.weight = weights[i];
    node.element = locate_point(mesh, node.x, node.r_hat);
    if (node.element < 0)
    {
      std::ostringstream msg;
      msg << "probe '" << probe.name << "' point (" << node.x[0] << ", " << node.x[1] << ", "
          << node.x[2] << ") is outside the mesh";
      throw ConfigError(msg.str());
    }
    probe.nodes.push_back(node);
  }
}

ProbeSample sample_fields(const Mesh &mesh, const ReferenceElement &ref, const FieldState &state,
                          const Probe &probe)
{
  ProbeSample out;
  std::vector<double> scratch;
  const bool want_h = probe.quantity != ProbeQuantity::E;
  const bool want_e = probe.quantity != ProbeQuantity::H;
  const std::vector<double> &prev = state.h_prev.empty() ? state.h : state.h_prev;
  for (const ProbeNode &node : probe.nodes)
  {
    const ElementGeometry g = element_geometry(mesh, node.element);
    out.e.push_back(want_e ? evaluate_field(ref, FieldKind::E, state.e, node.element, g,
                                            node.r_hat, scratch)
                           : Vec3{0.0, 0.0, 0.0});
    if (want_h)
    {
      const Vec3 a = evaluate_field(ref, FieldKind::H, state.h, node.element, g, node.r_hat, scratch);
      const Vec3 b = evaluate_field(ref, FieldKind::H, prev, node.element, g, node.r_hat, scratch);
      out.h.push_back(0.5 * (a + b));
    }
    else
    {
      out.h.push_back({0.0, 0.0, 0.0});
    }
  }
  return out;
}

std::vector<std::string> probe_columns(const Probe &probe, int dim)
{
  std::vector<std::string> cols;
  const auto comps = components(dim, probe.quantity);
  const std::size_t n = probe.segment ? probe.nodes.size() : 1;
  for (std::size_t i = 0; i < n; ++i)
  {
    for (const auto &c : comps)
    {
      cols.push_back(node_prefix(probe, i) + c.label);
    }
  }
  return cols;
}

std::vector<double> probe_row(const Probe &probe, int dim, const ProbeSample &sample)
{
  std::vector<double> row;
  const auto comps = components(dim, probe.quantity);
  const std::size_t n = probe.segment ? probe.nodes.size() : 1;
  for (std::size_t i = 0; i < n; ++i)
  {
    for (const auto &c : comps)
    {
      row.push_back(c.magnetic ? sample.h[i][c.axis] : sample.e[i][c.axis]);
    }
  }
  return row;
}

std::vector<double> ProbeSeries::column(const std::string &name) const
{
  for (std::size_t c = 0; c < columns.size(); ++c)
  {
    if (columns[c] == name)
    {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto &r : rows)
      {
        out.push_back(r[c]);
      }
      return out;
    }
  }
  throw InvalidArgument("no column named '" + name + "'");
}

Spectrum dft_spectrum(std::span<const std::complex<double>> series, double dt, bool hann)
{
  if (series.empty())
  {
    throw InvalidArgument("dft of an empty series");
  }
  if (!(dt > 0.0))
  {
    throw InvalidArgument("dft needs a positive sample interval");
  }
  const std::size_t n = series.size();
  std::vector<std::complex<double>> in(series.begin(), series.end());
  if (hann && n > 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      in[i] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1)));
    }
  }
  Spectrum s;
  s.dt = dt;
  fft(in, s.values, FFTW_FORWARD);
  s.omega.resize(n);
  for (std::size_t k = 0; k < n; ++k)
  {
    const double kk = k <= n / 2 ? double(k) : double(k) - double(n);
    s.omega[k] = 2.0 * std::numbers::pi * kk / (double(n) * dt);
  }
  return s;
}

Spectrum dft_spectrum(std::span<const double> series, double dt, bool hann)
{
  std::vector<std::complex<double>> c(series.begin(), series.end());
  return dft_spectrum(std::span<const std::complex<double>>(c), dt, hann);
}

std::vector<std::complex<double>> inverse_dft(std::span<const std::complex<double>> values)
{
  if (values.empty())
  {
    throw InvalidArgument("inverse dft of an empty spectrum");
  }
  std::vector<std::complex<double>> in(values.begin(), values.end()), out;
  fft(in, out, FFTW_BACKWARD);
  const double scale = 1.0 / double(values.size());
  for (auto &v : out)
  {
    v *= scale;
  }
  return out;
}

PortSeries port_series(const Probe &probe, int dim, const ProbeSeries &series)
{
  if (!probe.segment)
  {
    throw InvalidArgument("probe '" + probe.name + "' is not a segment");
  }
  PortSeries port;
  port.normal = probe.normal;
  const std::size_t samples = series.rows.size();
  const auto comps = components(dim, ProbeQuantity::Both);
  for (std::size_t i = 0; i < probe.nodes.size(); ++i)
  {
    port.weights.push_back(probe.nodes[i].weight);
    std::array<std::vector<double>, 3> e, h;
    for (int a = 0; a < 3; ++a)
    {
      e[a].assign(samples, 0.0);
      h[a].assign(samples, 0.0);
    }
    for (const auto &c : comps)
    {
      (c.magnetic ? h : e)[c.axis] = series.column(node_prefix(probe, i) + c.label);
    }
    port.e.push_back(std::move(e));
    port.h.push_back(std::move(h));
  }
  return port;
}

std::vector<std::complex<double>> port_flux_spectrum(const PortSeries &port, double dt,
                                                     bool conjugate, bool hann)
{
  if (port.e.empty())
  {
    throw InvalidArgument("port without nodes");
  }
  const std::size_t n = port.e[0][0].size();
  std::vector<std::complex<double>> flux(n, 0.0);
  for (std::size_t j = 0; j < port.e.size(); ++j)
  {
    std::array<Spectrum, 3> se, sh;
    for (int a = 0; a < 3; ++a)
    {
      se[a] = dft_spectrum(port.e[j][a], dt, hann);
      sh[a] = dft_spectrum(port.h[j][a], dt, hann);
    }
    for (std::size_t k = 0; k < n; ++k)
    {
      std::complex<double> h[3];
      for (int a = 0; a < 3; ++a)
      {
        h[a] = conjugate ? std::conj(sh[a].values[k]) : sh[a].values[k];
      }
      const auto &e0 = se[0].values[k];
      const auto &e1 = se[1].values[k];
      const auto &e2 = se[2].values[k];
      const std::complex<double> c[3] = {e1 * h[2] - e2 * h[1], e2 * h[0] - e0 * h[2],
                                         e0 * h[1] - e1 * h[0]};
      flux[k] += port.weights[j] *
                 (c[0] * port.normal[0] + c[1] * port.normal[1] + c[2] * port.normal[2]);
    }
  }
  return flux;
}

std::vector<double> s_parameter(std::span<const std::complex<double>> flux_a,
                                std::span<const std::complex<double>> flux_b)
{
  if (flux_a.size() != flux_b.size())
  {
    throw InvalidArgument("port spectra have different lengths");
  }
  std::vector<double> s(flux_a.size());
  for (std::size_t k = 0; k < s.size(); ++k)
  {
    const double den = std::abs(flux_a[k]);
    s[k] = den < 1e-14 ? std::numeric_limits<double>::quiet_NaN() : std::abs(flux_b[k]) / den;
  }
  return s;
}

void write_vtk(const std::string &path, const Mesh &mesh, const ReferenceElement &ref,
               const FieldState &state, bool subsample)
{
  const int d = mesh.dim;
  const int nv = d + 1;
  const int ne = mesh.num_elements();
  std::vector<double> phi(std::max(ref.e_modes(), ref.h_modes()));
  ref.e_basis().evaluate({0.25, 0.25, 0.25}, std::span<double>(phi.data(), ref.e_modes()));
  const double phi0 = phi[0];
  const std::vector<double> &prev = state.h_prev.empty() ? state.h : state.h_prev;
  std::vector<double> hmean(state.h.size());
  for (std::size_t i = 0; i < hmean.size(); ++i)
  {
    hmean[i] = 0.5 * (state.h[i] + prev[i]);
  }
  {
    std::ofstream os = open_out(path);
    os << "# vtk DataFile Version 3.0\n"
       << "dgtd fields t=" << state.time << "\n"
       << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.num_vertices() << " double\n";
    for (const Vec3 &v : mesh.vertices)
    {
      write_vector(os, v);
    }
    os << "CELLS " << ne << " " << ne * (nv + 1) << "\n";
    for (const auto &el : mesh.elements)
    {
      os << nv;
      for (int k = 0; k < nv; ++k)
      {
        os << " " << el[k];
      }
      os << "\n";
    }
    os << "CELL_TYPES " << ne << "\n";
    for (int e = 0; e < ne; ++e)
    {
      os << (d == 2 ? 5 : 10) << "\n";
    }
    os << "CELL_DATA " << ne << "\n";
    for (int pass = 0; pass < 2; ++pass)
    {
      os << "VECTORS " << (pass == 0 ? "e" : "h") << " double\n";
      for (int e = 0; e < ne; ++e)
      {
        const ElementGeometry g = element_geometry(mesh, e);
        write_vector(os, pass == 0 ? mean_value(ref, FieldKind::E, state.e, e, g, phi0)
                                   : mean_value(ref, FieldKind::H, hmean, e, g, phi0));
      }
    }
    if (!os)
    {
      throw IoError("failed writing '" + path + "'");
    }
  }
  if (!subsample)
  {
    return;
  }
  const int m = ref.degree() + 1;
  std::vector<Vec3> lattice;
  for (int k = 0; k <= (d == 3 ? m : 0); ++k)
  {
    for (int j = 0; j + k <= m; ++j)
    {
      for (int i = 0; i + j + k <= m; ++i)
      {
        lattice.push_back({double(i) / m, double(j) / m, double(k) / m});
      }
    }
  }
  const std::size_t np = lattice.size() * ne;
  std::string sub = path;
  if (sub.size() > 4 && sub.compare(sub.size() - 4, 4, ".vtk") == 0)
  {
    sub.resize(sub.size() - 4);
  }
  sub += "_sub.vtk";
  std::ofstream os = open_out(sub);
  os << "# vtk DataFile Version 3.0\n"
     << "dgtd sampled fields t=" << state.time << "\n"
     << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << np << " double\n";
  std::vector<Vec3> ev, hv;
  ev.reserve(np);
  hv.reserve(np);
  std::vector<double> scratch;
  for (int e = 0; e < ne; ++e)
  {
    const ElementGeometry g = element_geometry(mesh, e);
    for (const Vec3 &r : lattice)
    {
      write_vector(os, g.to_physical(r));
      ev.push_back(evaluate_field(ref, FieldKind::E, state.e, e, g, r, scratch));
      hv.push_back(evaluate_field(ref, FieldKind::H, hmean, e, g, r, scratch));
    }
  }
  os << "CELLS " << np << " " << 2 * np << "\n";
  for (std::size_t i = 0; i < np; ++i)
  {
    os << "1 " << i << "\n";
  }
  os << "CELL_TYPES " << np << "\n";
  for (std::size_t i = 0; i < np; ++i)
  {
    os << "1\n";
  }
  os << "POINT_DATA " << np << "\nVECTORS e double\n";
  for (const Vec3 &v : ev)
  {
    write_vector(os, v);
  }
  os << "VECTORS h double\n";
  for (const Vec3 &v : hv)
  {
    write_vector(os, v);
  }
  if (!os)
  {
    throw IoError("failed writing '" + sub + "'");
  }
}

void write_csv(const std::string &path, const ProbeSeries &series)
{
  std::ofstream os = open_out(path);
  os << "t";
  for (const auto &c : series.columns)
  {
    os << "," << c;
  }
  os << "\n";
  char buf[40];
  for (std::size_t r = 0; r < series.rows.size(); ++r)
  {
    std::snprintf(buf, sizeof buf, "%.16e", series.times[r]);
    os << buf;
    for (double v : series.rows[r])
    {
      std::snprintf(buf, sizeof buf, "%.16e", v);
      os << "," << buf;
    }
    os << "\n";
  }
  if (!os)
  {
    throw IoError("failed writing '" + path + "'");
  }
}

ProbeSeries read_csv(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw IoError("cannot open '" + path + "'");
  }
  ProbeSeries s;
  std::string line;
  if (!std::getline(is, line))
  {
    throw IoError(path + ": empty file");
  }
  {
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    if (cell != "t")
    {
      throw IoError(path + ":1: first column must be t");
    }
    while (std::getline(ss, cell, ','))
    {
      s.columns.push_back(cell);
    }
  }
  int lineno = 1;
  while (std::getline(is, line))
  {
    ++lineno;
    if (line.empty())
    {
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ss, cell, ','))
    {
      char *end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
      {
        throw IoError(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      values.push_back(v);
    }
    if (values.size() != s.columns.size() + 1)
    {
      throw IoError(path + ":" + std::to_string(lineno) + ": wrong number of columns");
    }
    s.times.push_back(values[0]);
    s.rows.emplace_back(values.begin() + 1, values.end());
  }
  return s;
}

}  // namespace dgtd
