// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dgtd
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string &s)
{
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<std::string> out;
  std::string w;
  while (is >> w)
  {
    out.push_back(w);
  }
  return out;
}

double to_double(const std::string &s)
{
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
  {
    throw ConfigError("expected a number, got '" + s + "'");
  }
  return v;
}

long to_long(const std::string &s)
{
  long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
  {
    throw ConfigError("expected an integer, got '" + s + "'");
  }
  return v;
}

int to_int(const std::string &s)
{
  const long v = to_long(s);
  if (v < -1000000000L || v > 1000000000L)
  {
    throw ConfigError("integer out of range: '" + s + "'");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string &s)
{
  if (s == "true" || s == "yes" || s == "on" || s == "1")
  {
    return true;
  }
  if (s == "false" || s == "no" || s == "off" || s == "0")
  {
    return false;
  }
  throw ConfigError("expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string &s)
{
  std::vector<double> out;
  for (const auto &w : words(s))
  {
    out.push_back(to_double(w));
  }
  return out;
}

Vec3 to_vec(const std::string &s)
{
  const auto v = to_list(s);
  if (v.empty() || v.size() > 3)
  {
    throw ConfigError("expected 1 to 3 numbers, got '" + s + "'");
  }
  Vec3 out{0.0, 0.0, 0.0};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

std::array<int, 3> to_cells(const std::string &s)
{
  const auto w = words(s);
  if (w.empty() || w.size() > 3)
  {
    throw ConfigError("expected 1 to 3 cell counts, got '" + s + "'");
  }
  std::array<int, 3> out{0, 0, 0};
  for (std::size_t i = 0; i < 3; ++i)
  {
    out[i] = to_int(w[std::min(i, w.size() - 1)]);
  }
  return out;
}

EnvelopeKind to_envelope(const std::string &s)
{
  if (s == "gaussian")
  {
    return EnvelopeKind::Gaussian;
  }
  if (s == "sine")
  {
    return EnvelopeKind::Sine;
  }
  if (s == "gaussian_sine")
  {
    return EnvelopeKind::GaussianSine;
  }
  throw ConfigError("unknown envelope '" + s + "' (gaussian, sine, gaussian_sine)");
}

const char *envelope_name(EnvelopeKind k)
{
  switch (k)
  {
    case EnvelopeKind::Gaussian:
      return "gaussian";
    case EnvelopeKind::Sine:
      return "sine";
    case EnvelopeKind::GaussianSine:
      return "gaussian_sine";
  }
  return "gaussian";
}

ProbeQuantity to_quantity(const std::string &s)
{
  if (s == "e")
  {
    return ProbeQuantity::E;
  }
  if (s == "h")
  {
    return ProbeQuantity::H;
  }
  if (s == "both")
  {
    return ProbeQuantity::Both;
  }
  throw ConfigError("unknown quantity '" + s + "' (e, h, both)");
}

const char *quantity_name(ProbeQuantity q)
{
  switch (q)
  {
    case ProbeQuantity::E:
      return "e";
    case ProbeQuantity::H:
      return "h";
    case ProbeQuantity::Both:
      return "both";
  }
  return "both";
}

// Splits "name.field"; both parts must be present.
std::pair<std::string, std::string> dotted(const std::string &key)
{
  const auto pos = key.find('.');
  if (pos == std::string::npos || pos == 0 || pos + 1 == key.size())
  {
    throw ConfigError("unknown key");
  }
  return {key.substr(0, pos), key.substr(pos + 1)};
}

NamedSource &source_named(SimulationConfig &c, const std::string &name)
{
  for (auto &s : c.sources)
  {
    if (s.name == name)
    {
      return s;
    }
  }
  NamedSource s;
  s.name = name;
  s.spec.tag.clear();
  c.sources.push_back(s);
  return c.sources.back();
}

Probe &probe_named(SimulationConfig &c, const std::string &name)
{
  for (auto &p : c.probes)
  {
    if (p.name == name)
    {
      return p;
    }
  }
  Probe p;
  p.name = name;
  c.probes.push_back(p);
  return c.probes.back();
}

std::string num(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec(const Vec3 &v, int dim)
{
  std::string s;
  for (int k = 0; k < dim; ++k)
  {
    s += (k ? " " : "") + num(v[k]);
  }
  return s;
}

void apply(SimulationConfig &c, const std::string &section, const std::string &key,
           const std::string &value, int line)
{
  const auto unknown = [] { throw ConfigError("unknown key"); };
  if (section == "domain")
  {
    if (key == "dim")
    {
      c.dim = to_int(value);
    }
    else if (key == "box_min")
    {
      c.box_min = to_vec(value);
    }
    else if (key == "box_max")
    {
      c.box_max = to_vec(value);
    }
    else if (key == "pml_thickness")
    {
      c.pml_thickness = to_vec(value);
    }
    else if (key == "hole_min")
    {
      c.hole_min = to_vec(value);
      c.has_hole = true;
    }
    else if (key == "hole_max")
    {
      c.hole_max = to_vec(value);
      c.has_hole = true;
    }
    else if (key == "hole_tag")
    {
      c.hole_tag = value;
    }
    else
    {
      unknown();
    }
  }
  else if (section == "mesh")
  {
    if (key == "cells")
    {
      c.cells = to_cells(value);
    }
    else if (key == "file")
    {
      c.mesh_file = value;
    }
    else
    {
      unknown();
    }
  }
  else if (section == "discretization")
  {
    if (key == "degree")
    {
      c.degree = to_int(value);
    }
    else if (key == "kappa")
    {
      c.kappa = to_double(value);
    }
    else if (key == "quadrature_bump")
    {
      c.quadrature_bump = to_int(value);
    }
    else if (key == "workers")
    {
      c.workers = to_int(value);
    }
    else
    {
      unknown();
    }
  }
  else if (section == "materials")
  {
    const auto [kind, region] = dotted(key);
    if (kind == "eps")
    {
      c.eps[region] = to_double(value);
    }
    else if (kind == "mu")
    {
      c.mu[region] = to_double(value);
    }
    else
    {
      unknown();
    }
    c.material_lines[region] = line;
  }
  else if (section == "pml")
  {
    if (key == "sigma")
    {
      c.sigma = to_double(value);
    }
    else if (key == "sweep")
    {
      c.sigma_sweep = to_list(value);
    }
    else
    {
      unknown();
    }
  }
  else if (section == "time")
  {
    if (key == "tau")
    {
      if (value == "auto")
      {
        c.tau.reset();
      }
      else
      {
        c.tau = to_double(value);
      }
    }
    else if (key == "steps")
    {
      if (value == "none")
      {
        c.steps.reset();
      }
      else
      {
        c.steps = to_long(value);
      }
    }
    else if (key == "final_time")
    {
      if (value == "none")
      {
        c.final_time.reset();
      }
      else
      {
        c.final_time = to_double(value);
      }
    }
    else if (key == "safety")
    {
      c.safety = to_double(value);
    }
    else
    {
      unknown();
    }
  }
  else if (section == "initial")
  {
    InitialSpec &i = c.initial;
    if (key == "kind")
    {
      if (value == "none")
      {
        i.kind = InitialKind::None;
      }
      else if (value == "cavity")
      {
        i.kind = InitialKind::Cavity;
      }
      else if (value == "gaussian")
      {
        i.kind = InitialKind::Gaussian;
      }
      else
      {
        throw ConfigError("unknown initial kind '" + value + "' (none, cavity, gaussian)");
      }
    }
    else if (key == "mode")
    {
      const auto w = words(value);
      if (w.size() != 2)
      {
        throw ConfigError("expected two mode indices, got '" + value + "'");
      }
      i.mode = {to_int(w[0]), to_int(w[1])};
    }
    else if (key == "amplitude")
    {
      i.amplitude = to_double(value);
    }
    else if (key == "field")
    {
      if (value != "e" && value != "h" && value != "curl")
      {
        throw ConfigError("expected e, h or curl, got '" + value + "'");
      }
      i.field = value;
    }
    else if (key == "center")
    {
      i.center = to_vec(value);
    }
    else if (key == "direction")
    {
      i.direction = to_vec(value);
    }
    else if (key == "width")
    {
      i.width = to_double(value);
    }
    else if (key == "polarization")
    {
      i.polarization = to_vec(value);
    }
    else
    {
      unknown();
    }
  }
  else if (section == "sources")
  {
    const auto [name, field] = dotted(key);
    NamedSource &ns = source_named(c, name);
    SourceSpec &s = ns.spec;
    if (ns.line == 0)
    {
      ns.line = line;
    }
    if (field == "tag")
    {
      s.tag = value;
      ns.line = line;
    }
    else if (field == "envelope")
    {
      s.envelope.kind = to_envelope(value);
    }
    else if (field == "t0")
    {
      s.envelope.t0 = to_double(value);
    }
    else if (field == "width")
    {
      s.envelope.width = to_double(value);
    }
    else if (field == "omega")
    {
      s.envelope.omega = to_double(value);
    }
    else if (field == "ramp")
    {
      s.envelope.ramp = to_double(value);
    }
    else if (field == "polarization")
    {
      s.polarization = to_vec(value);
    }
    else if (field == "direction")
    {
      s.direction = to_vec(value);
    }
    else if (field == "origin")
    {
      s.origin = to_vec(value);
    }
    else if (field == "speed")
    {
      s.speed = to_double(value);
    }
    else
    {
      unknown();
    }
  }
  else if (section == "probes")
  {
    const auto [name, field] = dotted(key);
    Probe &p = probe_named(c, name);
    if (field == "point")
    {
      p.a = to_vec(value);
      p.segment = false;
    }
    else if (field == "from")
    {
      p.a = to_vec(value);
      p.segment = true;
    }
    else if (field == "to")
    {
      p.b = to_vec(value);
      p.segment = true;
    }
    else if (field == "points")
    {
      p.points = to_int(value);
    }
    else if (field == "normal")
    {
      p.normal = to_vec(value);
    }
    else if (field == "quantity")
    {
      p.quantity = to_quantity(value);
    }
    else
    {
      unknown();
    }
  }
  else if (section == "output")
  {
    if (key == "directory")
    {
      c.directory = value;
    }
    else if (key == "cadence")
    {
      c.cadence = to_long(value);
    }
    else if (key == "csv")
    {
      c.csv = to_bool(value);
    }
    else if (key == "vtk")
    {
      c.vtk = to_bool(value);
    }
    else if (key == "vtk_every")
    {
      c.vtk_every = to_long(value);
    }
    else if (key == "vtk_subsample")
    {
      c.vtk_subsample = to_bool(value);
    }
    else
    {
      unknown();
    }
  }
  else
  {
    throw ConfigError("unknown section [" + section + "]");
  }
}

}  // namespace

Vec3 SimulationConfig::outer_min() const
{
  return box_min - pml_thickness;
}

Vec3 SimulationConfig::outer_max() const
{
  return box_max + pml_thickness;
}

bool SimulationConfig::has_pml() const
{
  for (int k = 0; k < dim; ++k)
  {
    if (pml_thickness[k] > 0.0)
    {
      return true;
    }
  }
  return false;
}

StretchSpec SimulationConfig::stretch() const
{
  StretchSpec s;
  s.dim = dim;
  s.sigma = sigma;
  s.outer_min = outer_min();
  s.outer_max = outer_max();
  for (int k = 0; k < dim; ++k)
  {
    s.half_widths[k] = pml_thickness[k] > 0.0 ? box_max[k] : 0.0;
  }
  return s;
}

long SimulationConfig::step_count(double tau_value) const
{
  if (steps)
  {
    return *steps;
  }
  if (!final_time)
  {
    return 100;
  }
  const double t = *final_time;
  return static_cast<long>(std::ceil(t / tau_value - 1e-9));
}

std::vector<SourceSpec> SimulationConfig::source_specs() const
{
  std::vector<SourceSpec> out;
  for (const auto &s : sources)
  {
    out.push_back(s.spec);
  }
  return out;
}

void SimulationConfig::validate() const
{
  if (dim != 2 && dim != 3)
  {
    throw ConfigError("[domain] dim must be 2 or 3");
  }
  for (int k = 0; k < dim; ++k)
  {
    if (!(box_min[k] < box_max[k]))
    {
      throw ConfigError("[domain] box_min must be below box_max on every axis");
    }
    if (pml_thickness[k] < 0.0)
    {
      throw ConfigError("[domain] pml_thickness must be non-negative");
    }
    if (pml_thickness[k] > 0.0 && std::abs(box_min[k] + box_max[k]) > 1e-12 * (box_max[k] - box_min[k]))
    {
      throw ConfigError("[domain] the box must be centered at the origin on axes with a layer");
    }
    if (mesh_file.empty() && cells[k] < 1)
    {
      throw ConfigError("[mesh] cells must be positive");
    }
  }
  if (has_hole)
  {
    for (int k = 0; k < dim; ++k)
    {
      if (!(hole_min[k] < hole_max[k]) || hole_min[k] <= box_min[k] || hole_max[k] >= box_max[k])
      {
        throw ConfigError("[domain] the hole must be a non-empty box inside the interior box");
      }
    }
  }
  if (degree < 0 || degree > 15)
  {
    throw ConfigError("[discretization] degree must be in 0..15");
  }
  if (!(kappa > 0.0))
  {
    throw ConfigError("[discretization] kappa must be positive");
  }
  if (quadrature_bump < 0)
  {
    throw ConfigError("[discretization] quadrature_bump must be non-negative");
  }
  if (workers < 1)
  {
    throw ConfigError("[discretization] workers must be at least 1");
  }
  for (const auto *m : {&eps, &mu})
  {
    for (const auto &[region, v] : *m)
    {
      if (!(v > 0.0))
      {
        throw ConfigError("[materials] value for region '" + region + "' must be positive");
      }
    }
  }
  if (sigma < 0.0)
  {
    throw ConfigError("[pml] sigma must be non-negative");
  }
  for (double s : sigma_sweep)
  {
    if (s < 0.0)
    {
      throw ConfigError("[pml] sweep values must be non-negative");
    }
  }
  if (tau && !(*tau > 0.0))
  {
    throw ConfigError("[time] tau must be positive or auto");
  }
  if (steps && final_time)
  {
    throw ConfigError("[time] give exactly one of steps and final_time");
  }
  if (steps && *steps < 0)
  {
    throw ConfigError("[time] steps must be non-negative");
  }
  if (final_time && !(*final_time > 0.0))
  {
    throw ConfigError("[time] final_time must be positive");
  }
  if (!(safety > 0.0))
  {
    throw ConfigError("[time] safety must be positive");
  }
  if (initial.kind == InitialKind::Cavity)
  {
    const auto [m, n] = initial.mode;
    const bool ok = dim == 2 ? (m >= 0 && n >= 0 && m + n > 0) : (m >= 1 && n >= 1);
    if (!ok)
    {
      throw ConfigError("[initial] invalid cavity mode indices");
    }
  }
  if (initial.kind == InitialKind::Gaussian && !(initial.width > 0.0))
  {
    throw ConfigError("[initial] width must be positive");
  }
  const double nd = norm(initial.direction);
  if (nd != 0.0 && std::abs(nd - 1.0) > 1e-12)
  {
    throw ConfigError("[initial] direction must be a unit vector or zero");
  }
  std::set<std::string> tags;
  for (const auto &s : sources)
  {
    const std::string where = "[sources] line " + std::to_string(s.line) + ": source '" + s.name + "'";
    if (s.spec.tag.empty())
    {
      throw ConfigError(where + " has no tag");
    }
    if (!tags.insert(s.spec.tag).second)
    {
      throw ConfigError(where + " reuses tag '" + s.spec.tag + "'");
    }
    try
    {
      s.spec.validate();
    }
    catch (const ConfigError &e)
    {
      throw ConfigError(where + ": " + e.what());
    }
  }
  for (const auto &p : probes)
  {
    if (p.points < 0)
    {
      throw ConfigError("[probes] probe '" + p.name + "' needs a non-negative point count");
    }
  }
  if (cadence < 0 || vtk_every < 0)
  {
    throw ConfigError("[output] cadence and vtk_every must be non-negative");
  }
}

SimulationConfig parse_config(const std::string &text, const std::string &origin)
{
  SimulationConfig c;
  std::istringstream is(text);
  std::string raw, section;
  std::set<std::string> seen;
  int line = 0;
  bool have_dim = false;
  while (std::getline(is, raw))
  {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty())
    {
      continue;
    }
    const std::string where = origin + ":" + std::to_string(line) + ": ";
    if (s.front() == '[')
    {
      if (s.back() != ']')
      {
        throw ConfigError(where + "malformed section header '" + s + "'");
      }
      section = trim(s.substr(1, s.size() - 2));
      static const std::set<std::string> known{"domain",  "mesh",    "discretization",
                                               "materials", "pml",   "time",
                                               "initial", "sources", "probes",
                                               "output"};
      if (!known.count(section))
      {
        throw ConfigError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError(where + "expected key = value, got '" + s + "'");
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty())
    {
      throw ConfigError(where + "key '" + key + "' outside of a section");
    }
    if (!seen.insert(section + "/" + key).second)
    {
      throw ConfigError(where + "[" + section + "] duplicate key '" + key + "'");
    }
    if (value.empty())
    {
      throw ConfigError(where + "[" + section + "] key '" + key + "' has no value");
    }
    try
    {
      apply(c, section, key, value, line);
    }
    catch (const ConfigError &e)
    {
      throw ConfigError(where + "[" + section + "] key '" + key + "': " + e.what());
    }
    have_dim = have_dim || (section == "domain" && key == "dim");
  }
  if (!have_dim)
  {
    throw ConfigError(origin + ": missing mandatory key [domain] dim");
  }
  try
  {
    c.validate();
  }
  catch (const ConfigError &e)
  {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

SimulationConfig load_config(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw IoError("cannot open config file " + path);
  }
  std::stringstream ss;
  ss << is.rdbuf();
  SimulationConfig c = parse_config(ss.str(), path);
  // Mesh files are relative to the configuration file.
  const std::filesystem::path mesh(c.mesh_file);
  if (!c.mesh_file.empty() && mesh.is_relative())
  {
    c.mesh_file = (std::filesystem::path(path).parent_path() / mesh).lexically_normal().string();
  }
  return c;
}

void set_config_value(SimulationConfig &config, const std::string &section, const std::string &key,
                      const std::string &value)
{
  try
  {
    apply(config, section, key, trim(value), 0);
  }
  catch (const ConfigError &e)
  {
    throw ConfigError("[" + section + "] key '" + key + "': " + e.what());
  }
}

std::string dump_config(const SimulationConfig &c)
{
  const int d = c.dim;
  std::ostringstream os;
  os << "[domain]\ndim = " << d << "\nbox_min = " << vec(c.box_min, d)
     << "\nbox_max = " << vec(c.box_max, d) << "\npml_thickness = " << vec(c.pml_thickness, d)
     << "\n";
  if (c.has_hole)
  {
    os << "hole_min = " << vec(c.hole_min, d) << "\nhole_max = " << vec(c.hole_max, d)
       << "\nhole_tag = " << c.hole_tag << "\n";
  }
  os << "\n[mesh]\n";
  if (c.mesh_file.empty())
  {
    os << "cells = " << c.cells[0];
    for (int k = 1; k < d; ++k)
    {
      os << " " << c.cells[k];
    }
    os << "\n";
  }
  else
  {
    os << "file = " << c.mesh_file << "\n";
  }
  os << "\n[discretization]\ndegree = " << c.degree << "\nkappa = " << num(c.kappa)
     << "\nquadrature_bump = " << c.quadrature_bump << "\nworkers = " << c.workers << "\n";
  os << "\n[materials]\n";
  for (const auto &[r, v] : c.eps)
  {
    os << "eps." << r << " = " << num(v) << "\n";
  }
  for (const auto &[r, v] : c.mu)
  {
    os << "mu." << r << " = " << num(v) << "\n";
  }
  os << "\n[pml]\nsigma = " << num(c.sigma) << "\n";
  if (!c.sigma_sweep.empty())
  {
    os << "sweep =";
    for (double s : c.sigma_sweep)
    {
      os << " " << num(s);
    }
    os << "\n";
  }
  os << "\n[time]\ntau = " << (c.tau ? num(*c.tau) : std::string("auto")) << "\n";
  if (c.steps)
  {
    os << "steps = " << *c.steps << "\n";
  }
  if (c.final_time)
  {
    os << "final_time = " << num(*c.final_time) << "\n";
  }
  os << "safety = " << num(c.safety) << "\n";
  const InitialSpec &i = c.initial;
  os << "\n[initial]\nkind = "
     << (i.kind == InitialKind::None ? "none" : i.kind == InitialKind::Cavity ? "cavity" : "gaussian")
     << "\nmode = " << i.mode[0] << " " << i.mode[1] << "\namplitude = " << num(i.amplitude)
     << "\nfield = " << i.field << "\ncenter = " << vec(i.center, 3)
     << "\ndirection = " << vec(i.direction, 3)
     << "\nwidth = " << num(i.width) << "\npolarization = " << vec(i.polarization, 3) << "\n";
  os << "\n[sources]\n";
  for (const auto &ns : c.sources)
  {
    const SourceSpec &s = ns.spec;
    const std::string n = ns.name + ".";
    os << n << "tag = " << s.tag << "\n"
       << n << "envelope = " << envelope_name(s.envelope.kind) << "\n"
       << n << "t0 = " << num(s.envelope.t0) << "\n"
       << n << "width = " << num(s.envelope.width) << "\n"
       << n << "omega = " << num(s.envelope.omega) << "\n"
       << n << "ramp = " << num(s.envelope.ramp) << "\n"
       << n << "polarization = " << vec(s.polarization, 3) << "\n"
       << n << "direction = " << vec(s.direction, 3) << "\n"
       << n << "origin = " << vec(s.origin, 3) << "\n"
       << n << "speed = " << num(s.speed) << "\n";
  }
  os << "\n[probes]\n";
  for (const auto &p : c.probes)
  {
    const std::string n = p.name + ".";
    if (p.segment)
    {
      os << n << "from = " << vec(p.a, 3) << "\n" << n << "to = " << vec(p.b, 3) << "\n";
    }
    else
    {
      os << n << "point = " << vec(p.a, 3) << "\n";
    }
    os << n << "points = " << p.points << "\n"
       << n << "normal = " << vec(p.normal, 3) << "\n"
       << n << "quantity = " << quantity_name(p.quantity) << "\n";
  }
  os << "\n[output]\ndirectory = " << c.directory << "\ncadence = " << c.cadence
     << "\ncsv = " << (c.csv ? "true" : "false") << "\nvtk = " << (c.vtk ? "true" : "false")
     << "\nvtk_every = " << c.vtk_every
     << "\nvtk_subsample = " << (c.vtk_subsample ? "true" : "false") << "\n";
  return os.str();
}

void check_tags(const SimulationConfig &config, const Mesh &mesh)
{
  const auto tags = mesh.tags();
  for (const auto &s : config.sources)
  {
    if (std::find(tags.begin(), tags.end(), s.spec.tag) == tags.end())
    {
      throw ConfigError("[sources] line " + std::to_string(s.line) + ": boundary tag '" +
                        s.spec.tag + "' of source '" + s.name + "' does not exist in the mesh");
    }
  }
  const auto regions = mesh.region_names();
  for (const auto &[region, line] : config.material_lines)
  {
    if (std::find(regions.begin(), regions.end(), region) == regions.end())
    {
      throw ConfigError("[materials] line " + std::to_string(line) + ": region '" + region +
                        "' does not exist in the mesh");
    }
  }
}

std::string config_reference()
{
  return R"(Configuration file: [section] headers, key = value, '#' comments.
Normalized units: c = eps0 = mu0 = 1. Vectors are 1 to 3 numbers.

[domain]
  dim            (mandatory) 2 or 3
  box_min        0 0 0      interior box
  box_max        1 1 1
  pml_thickness  0 0 0      layer thickness per axis on both sides (box centered at 0)
  hole_min       -          optional hole removed from a generated mesh
  hole_max       -
  hole_tag       incidentfield   boundary tag of the hole
[mesh]
  cells          4 4 4      cells per axis over the box grown by the layer
  file           -          gmsh 2.2 ASCII mesh instead of the generator
[discretization]
  degree         2          p: h has degree p, e degree p + 1
  kappa          1          penalty scale
  quadrature_bump 0         extra quadrature order for all reference integrals
  workers        1          threads for operator application
[materials]
  eps.<region>   1          per-region permittivity
  mu.<region>    1          per-region permeability
[pml]
  sigma          0          layer damping (0 disables the layer)
  sweep          -          sigma values for pml-test
[time]
  tau            auto       step size or auto (safety times the stable estimate)
  steps          100        exactly one of steps and final_time
  final_time     -
  safety         0.5
[initial]
  kind           none       none, cavity or gaussian
  mode           1 1        cavity mode indices
  amplitude      1
  field          h          gaussian: e or h (g times polarization) or curl
                            (e = width grad g x polarization, free of static modes)
  center         0 0 0
  direction      0 0 0      unit normal of a planar profile (0: radial)
  width          0.1
  polarization   0 0 1
[sources]
  <name>.tag     -          boundary tag carrying the incident field
  <name>.envelope gaussian  gaussian, sine or gaussian_sine
  <name>.t0      0
  <name>.width   1
  <name>.omega   0
  <name>.ramp    0
  <name>.polarization 1 0 0
  <name>.direction 0 0 0    unit propagation direction (0: uniform in space)
  <name>.origin  0 0 0
  <name>.speed   1
[probes]
  <name>.point   -          point probe
  <name>.from    -          segment probe start
  <name>.to      -          segment probe end
  <name>.points  0          segment nodes (0: 2 (p + 1))
  <name>.normal  1 0 0      port normal
  <name>.quantity both      e, h or both
[output]
  directory      out
  cadence        10         probe sampling interval in steps (0: first and last)
  csv            true
  vtk            false
  vtk_every      0          snapshot interval in steps (0: final state only)
  vtk_subsample  false
)";
}

}  // namespace dgtd
