// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "dgtd/fields.hpp"
#include "dgtd/pml.hpp"

namespace dgtd
{

namespace
{

constexpr double kPi = std::numbers::pi;

std::string fmt(const char *format, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

void ensure_directory(const std::string &dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw IoError("cannot create directory " + dir + ": " + ec.message());
  }
}

std::vector<double> averaged_h(const FieldState &s)
{
  std::vector<double> out(s.h.size());
  const auto &prev = s.h_prev.size() == s.h.size() ? s.h_prev : s.h;
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    out[i] = 0.5 * (s.h[i] + prev[i]);
  }
  return out;
}

}  // namespace

double CavityMode::omega() const
{
  const double kx = m * kPi / (hi[0] - lo[0]);
  const double ky = n * kPi / (hi[1] - lo[1]);
  return std::sqrt(kx * kx + ky * ky);
}

Vec3 CavityMode::e(const Vec3 &x, double t) const
{
  const double kx = m * kPi / (hi[0] - lo[0]);
  const double ky = n * kPi / (hi[1] - lo[1]);
  const double w = omega();
  const double u = x[0] - lo[0], v = x[1] - lo[1];
  if (dim == 2)
  {
    const double s = amplitude * std::sin(w * t) / w;
    return {-ky * std::cos(kx * u) * std::sin(ky * v) * s, kx * std::sin(kx * u) * std::cos(ky * v) * s,
            0.0};
  }
  return {0.0, 0.0, amplitude * std::sin(kx * u) * std::sin(ky * v) * std::cos(w * t)};
}

Vec3 CavityMode::h(const Vec3 &x, double t) const
{
  const double kx = m * kPi / (hi[0] - lo[0]);
  const double ky = n * kPi / (hi[1] - lo[1]);
  const double w = omega();
  const double u = x[0] - lo[0], v = x[1] - lo[1];
  if (dim == 2)
  {
    return {0.0, 0.0, amplitude * std::cos(kx * u) * std::cos(ky * v) * std::cos(w * t)};
  }
  const double s = -amplitude * std::sin(w * t) / w;
  return {ky * std::sin(kx * u) * std::cos(ky * v) * s, -kx * std::cos(kx * u) * std::sin(ky * v) * s,
          0.0};
}

Mesh build_mesh(const SimulationConfig &c)
{
  Mesh mesh;
  if (!c.mesh_file.empty())
  {
    mesh = load_gmsh(c.mesh_file);
    if (mesh.dim != c.dim)
    {
      throw ConfigError("[mesh] file " + c.mesh_file + " has dimension " + std::to_string(mesh.dim) +
                        ", expected " + std::to_string(c.dim));
    }
  }
  else
  {
    StructuredSpec s;
    s.dim = c.dim;
    s.box_min = c.outer_min();
    s.box_max = c.outer_max();
    s.cells = c.cells;
    s.has_hole = c.has_hole;
    s.hole_min = c.hole_min;
    s.hole_max = c.hole_max;
    s.hole_tag = c.hole_tag;
    mesh = generate_structured(s);
  }
  if (c.has_pml())
  {
    const StretchSpec spec = c.stretch();
    spec.validate();
    classify_regions(mesh, spec);
  }
  return mesh;
}

Simulation::Simulation(SimulationConfig config) : config_(std::move(config))
{
  config_.validate();
  mesh_ = std::make_unique<Mesh>(build_mesh(config_));
  check_tags(config_, *mesh_);
  ref_ = std::make_unique<ReferenceElement>(config_.dim, config_.degree, config_.quadrature_bump);
  const auto fallback = [](const std::map<std::string, double> &m) {
    const auto it = m.find("air");
    return it == m.end() ? 1.0 : it->second;
  };
  materials_ = Materials::from_regions(*mesh_, config_.eps, config_.mu, fallback(config_.eps),
                                       fallback(config_.mu));
  const auto sources = config_.source_specs();
  op_ = std::make_unique<MaxwellOperator>(*mesh_, *ref_, incident_tag_map(sources), config_.workers);
  std::vector<PmlTensors> pml;
  if (config_.has_pml())
  {
    pml = element_pml_tensors(*mesh_, config_.sigma);
  }
  const double tau = config_.tau.value_or(
      stable_timestep(*mesh_, config_.degree, materials_, config_.safety));
  stepper_ = std::make_unique<Stepper>(*op_, materials_, pml, config_.sigma,
                                       penalty_parameters(*mesh_, config_.degree, config_.kappa),
                                       tau, sources);
  probes_ = config_.probes;
  for (auto &p : probes_)
  {
    resolve_probe(*mesh_, config_.degree, p);
  }
  for (int e = 0; e < mesh_->num_elements(); ++e)
  {
    if (!is_pml_label(mesh_->regions[e]))
    {
      interior_.push_back(e);
    }
  }
}

FieldState Simulation::initial_state() const
{
  const InitialSpec &i = config_.initial;
  switch (i.kind)
  {
    case InitialKind::None:
      return stepper_->zero_state();
    case InitialKind::Cavity:
    {
      CavityMode mode;
      mode.dim = config_.dim;
      mode.lo = config_.box_min;
      mode.hi = config_.box_max;
      mode.m = i.mode[0];
      mode.n = i.mode[1];
      mode.amplitude = i.amplitude;
      return project_state(
          *stepper_, [mode](const Vec3 &x, double t) { return mode.e(x, t); },
          [mode](const Vec3 &x, double t) { return mode.h(x, t); });
    }
    case InitialKind::Gaussian:
    {
      const auto offset = [i](const Vec3 &x) {
        const Vec3 r = x - i.center;
        return norm(i.direction) > 0.0 ? dot(r, i.direction) * i.direction : r;
      };
      const TimeField g = [i, offset](const Vec3 &x, double) {
        const Vec3 r = offset(x);
        return (i.amplitude * std::exp(-dot(r, r) / (i.width * i.width))) * i.polarization;
      };
      if (i.field == "curl")
      {
        const TimeField c = [i, offset](const Vec3 &x, double) {
          const Vec3 r = offset(x);
          const double g = std::exp(-dot(r, r) / (i.width * i.width));
          const Vec3 grad = (-2.0 * g / (i.width * i.width)) * r;
          return (i.amplitude * i.width) * cross(grad, i.polarization);
        };
        return project_state(*stepper_, c, nullptr);
      }
      return i.field == "e" ? project_state(*stepper_, g, nullptr)
                            : project_state(*stepper_, nullptr, g);
    }
  }
  return stepper_->zero_state();
}

double Simulation::interior_energy(const FieldState &s) const
{
  const FieldLayout &l = op_->layout();
  std::vector<double> me(s.e.size()), mh(s.h.size());
  apply_mass(stepper_->e_mass(), s.e, me);
  const auto &prev = s.h_prev.size() == s.h.size() ? s.h_prev : s.h;
  apply_mass(stepper_->h_mass(), s.h, mh);
  double sum = 0.0;
  for (int el : interior_)
  {
    for (std::size_t i = l.e_offset(el); i < l.e_offset(el) + l.e_stride(); ++i)
    {
      sum += s.e[i] * me[i];
    }
    for (std::size_t i = l.h_offset(el); i < l.h_offset(el) + l.h_stride(); ++i)
    {
      sum += prev[i] * mh[i];
    }
  }
  return 0.5 * sum;
}

RunSummary cmd_run(const SimulationConfig &config, const std::string &out_dir)
{
  const auto start = std::chrono::steady_clock::now();
  Simulation sim(config);
  const std::string dir = out_dir.empty() ? config.directory : out_dir;
  ensure_directory(dir);
  const int d = config.dim;
  const Stepper &st = sim.stepper();
  FieldState state = sim.initial_state();
  const long steps = sim.steps();

  ProbeSeries probes, energy;
  for (const auto &p : sim.probes())
  {
    const auto cols = probe_columns(p, d);
    probes.columns.insert(probes.columns.end(), cols.begin(), cols.end());
  }
  energy.columns = {"energy", "interior_energy"};

  RunSummary out;
  out.tau = sim.tau();
  out.elements = sim.mesh().num_elements();
  out.dofs = static_cast<long>(state.e.size() + state.h.size() + state.hs.size());
  out.initial_energy = st.energy(state);
  out.max_energy = out.initial_energy;

  const auto vtk_name = [&](long k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "fields_%06ld.vtk", k);
    return (std::filesystem::path(dir) / buf).string();
  };
  const auto sample = [&](long k) {
    std::vector<double> row;
    for (const auto &p : sim.probes())
    {
      const auto r = probe_row(p, d, sample_fields(sim.mesh(), sim.reference(), state, p));
      row.insert(row.end(), r.begin(), r.end());
    }
    if (!row.empty())
    {
      probes.times.push_back(state.time);
      probes.rows.push_back(std::move(row));
    }
    const double en = st.energy(state);
    out.max_energy = std::max(out.max_energy, en);
    energy.times.push_back(state.time);
    energy.rows.push_back({en, sim.interior_energy(state)});
    if (config.vtk && config.vtk_every > 0 && k % config.vtk_every == 0)
    {
      write_vtk(vtk_name(k), sim.mesh(), sim.reference(), state, config.vtk_subsample);
      out.files.push_back(vtk_name(k));
    }
  };

  sample(0);
  for (long k = 1; k <= steps; ++k)
  {
    st.step(state);
    if ((config.cadence > 0 && k % config.cadence == 0) || k == steps)
    {
      sample(k);
    }
  }
  st.check(state);
  if (config.vtk && (config.vtk_every == 0 || steps % config.vtk_every != 0))
  {
    write_vtk(vtk_name(steps), sim.mesh(), sim.reference(), state, config.vtk_subsample);
    out.files.push_back(vtk_name(steps));
  }
  if (config.csv)
  {
    if (!probes.columns.empty())
    {
      const std::string p = (std::filesystem::path(dir) / "probes.csv").string();
      write_csv(p, probes);
      out.files.push_back(p);
    }
    const std::string p = (std::filesystem::path(dir) / "energy.csv").string();
    write_csv(p, energy);
    out.files.push_back(p);
  }
  out.steps = state.step;
  out.time = state.time;
  out.final_energy = st.energy(state);
  out.final_interior_energy = sim.interior_energy(state);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string js = (std::filesystem::path(dir) / "summary.json").string();
  out.files.push_back(js);
  std::ofstream os(js);
  if (!os)
  {
    throw IoError("cannot write " + js);
  }
  os << summary_json(out) << "\n";
  return out;
}

std::string summary_json(const RunSummary &s, bool with_timing)
{
  nlohmann::ordered_json j;
  j["steps"] = s.steps;
  j["time"] = s.time;
  j["tau"] = s.tau;
  j["elements"] = s.elements;
  j["dofs"] = s.dofs;
  j["initial_energy"] = s.initial_energy;
  j["final_energy"] = s.final_energy;
  j["max_energy"] = s.max_energy;
  j["final_interior_energy"] = s.final_interior_energy;
  if (with_timing)
  {
    j["wall_seconds"] = s.wall_seconds;
  }
  j["files"] = s.files;
  return j.dump(2);
}

std::vector<ConvergenceRow> cmd_convergence(const SimulationConfig &config, int pmin, int pmax,
                                            const std::string &csv_path)
{
  if (pmin < 0 || pmax < pmin)
  {
    throw ConfigError("convergence: invalid degree range");
  }
  if (config.has_pml() || !config.sources.empty() || config.has_hole || !config.mesh_file.empty())
  {
    throw ConfigError("convergence: needs a generated closed cavity without layer, hole or sources");
  }
  SimulationConfig base = config;
  base.probes.clear();
  if (base.initial.kind != InitialKind::Cavity)
  {
    base.initial = InitialSpec{};
    base.initial.kind = InitialKind::Cavity;
  }
  CavityMode mode;
  mode.dim = base.dim;
  mode.lo = base.box_min;
  mode.hi = base.box_max;
  mode.m = base.initial.mode[0];
  mode.n = base.initial.mode[1];
  mode.amplitude = base.initial.amplitude;
  const double horizon = base.final_time.value_or(2.0 * kPi / mode.omega());
  double h = 0.0;
  for (int k = 0; k < base.dim; ++k)
  {
    h = std::max(h, (base.box_max[k] - base.box_min[k]) / base.cells[k]);
  }

  std::vector<ConvergenceRow> rows;
  double previous = 0.0;
  for (int p = pmin; p <= pmax; ++p)
  {
    SimulationConfig c = base;
    c.degree = p;
    Simulation probe_sim(c);
    const double tau_max = probe_sim.tau();
    const long steps = std::max(1L, static_cast<long>(std::ceil(horizon / tau_max - 1e-9)));
    c.tau = horizon / steps;
    c.steps = steps;
    c.final_time.reset();
    Simulation sim(c);
    FieldState s = sim.initial_state();
    for (long k = 0; k < steps; ++k)
    {
      sim.stepper().step(s);
    }
    sim.stepper().check(s);
    const double t = s.time;
    const double th = t + 0.5 * sim.tau();
    const VectorField fe = [&](const Vec3 &x) { return mode.e(x, t); };
    const VectorField fh = [&](const Vec3 &x) { return mode.h(x, th); };
    ConvergenceRow r;
    r.degree = p;
    r.h = h;
    r.error_e = l2_error(sim.mesh(), sim.reference(), FieldKind::E, s.e, &fe);
    r.error_h = l2_error(sim.mesh(), sim.reference(), FieldKind::H, s.h, &fh);
    const double total = std::hypot(r.error_e, r.error_h);
    r.ratio = rows.empty() ? std::numeric_limits<double>::quiet_NaN() : previous / total;
    previous = total;
    rows.push_back(r);
  }
  if (!csv_path.empty())
  {
    const auto parent = std::filesystem::path(csv_path).parent_path();
    if (!parent.empty())
    {
      ensure_directory(parent.string());
    }
    std::ofstream os(csv_path);
    if (!os)
    {
      throw IoError("cannot write " + csv_path);
    }
    os << "p,h,error_e,error_h,ratio\n";
    for (const auto &r : rows)
    {
      os << r.degree << "," << fmt("%.16e", r.h) << "," << fmt("%.16e", r.error_e) << ","
         << fmt("%.16e", r.error_h) << "," << (std::isnan(r.ratio) ? "nan" : fmt("%.16e", r.ratio))
         << "\n";
    }
  }
  return rows;
}

InteriorComparison::InteriorComparison(const Simulation &a, const Simulation &b)
    : a_(a), b_(b)
{
  if (a.config().dim != b.config().dim || a.config().degree != b.config().degree)
  {
    throw InvalidArgument("InteriorComparison: runs differ in dimension or degree");
  }
  std::map<std::array<long long, 3>, int> index;
  const auto key = [](const Vec3 &c) {
    return std::array<long long, 3>{std::llround(c[0] * 1e8), std::llround(c[1] * 1e8),
                                    std::llround(c[2] * 1e8)};
  };
  for (int e : b.interior_elements())
  {
    index[key(element_geometry(b.mesh(), e).centroid)] = e;
  }
  for (int e : a.interior_elements())
  {
    const auto it = index.find(key(element_geometry(a.mesh(), e).centroid));
    if (it == index.end())
    {
      throw MeshError("InteriorComparison: interior element " + std::to_string(e) +
                      " has no counterpart");
    }
    pairs_.emplace_back(e, it->second);
  }
  rule_ = simplex_quadrature(a.config().dim, std::min(2 * a.config().degree + 4, kMaxQuadratureOrder));
  for (const auto &[ea, eb] : pairs_)
  {
    const ElementGeometry ga = element_geometry(a.mesh(), ea);
    const ElementGeometry gb = element_geometry(b.mesh(), eb);
    same_.push_back(ga.A == gb.A && ga.b == gb.b);
  }
  const ReferenceElement &ref = a.reference();
  const int nq = static_cast<int>(rule_.size());
  phi_e_.resize(nq, ref.e_modes());
  phi_h_.resize(nq, ref.h_modes());
  for (int q = 0; q < nq; ++q)
  {
    ref.e_basis().evaluate(rule_.points[q], std::span<double>(phi_e_.row(q).data(), ref.e_modes()));
    ref.h_basis().evaluate(rule_.points[q], std::span<double>(phi_h_.row(q).data(), ref.h_modes()));
  }
}

Vec3 InteriorComparison::tabulated(FieldKind kind, std::span<const double> coeffs, int el,
                                   const ElementGeometry &g, int q) const
{
  const ReferenceElement &ref = a_.reference();
  const bool e = kind == FieldKind::E;
  const int nm = e ? ref.e_modes() : ref.h_modes();
  const int nc = e ? ref.e_components() : ref.h_components();
  const double *phi = e ? phi_e_.row(q).data() : phi_h_.row(q).data();
  const double *u = coeffs.data() + std::size_t(el) * nm * nc;
  if (nc == 1)
  {
    double v = 0.0;
    for (int m = 0; m < nm; ++m)
    {
      v += u[m] * phi[m];
    }
    return {0.0, 0.0, v};
  }
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int m = 0; m < nm; ++m)
  {
    for (int k = 0; k < nc; ++k)
    {
      c[k] += u[m * nc + k] * phi[m];
    }
  }
  const Eigen::Vector3d v = g.inv_t * c;
  return {v[0], v[1], v[2]};
}

InteriorComparison::Norms InteriorComparison::difference(const FieldState &a,
                                                         const FieldState &b) const
{
  const auto ha = averaged_h(a);
  const auto hb = averaged_h(b);
  const ReferenceElement &ra = a_.reference();
  const ReferenceElement &rb = b_.reference();
  std::vector<double> scratch;
  Norms n;
  double sum = 0.0;
  for (std::size_t i = 0; i < pairs_.size(); ++i)
  {
    const auto [ea, eb] = pairs_[i];
    const ElementGeometry ga = element_geometry(a_.mesh(), ea);
    const ElementGeometry gb = element_geometry(b_.mesh(), eb);
    for (int q = 0; q < static_cast<int>(rule_.size()); ++q)
    {
      Vec3 de, dh;
      if (same_[i])
      {
        de = tabulated(FieldKind::E, a.e, ea, ga, q) - tabulated(FieldKind::E, b.e, eb, gb, q);
        dh = tabulated(FieldKind::H, ha, ea, ga, q) - tabulated(FieldKind::H, hb, eb, gb, q);
      }
      else
      {
        const Vec3 rb_hat = gb.to_reference(ga.to_physical(rule_.points[q]));
        de = evaluate_field(ra, FieldKind::E, a.e, ea, ga, rule_.points[q], scratch) -
             evaluate_field(rb, FieldKind::E, b.e, eb, gb, rb_hat, scratch);
        dh = evaluate_field(ra, FieldKind::H, ha, ea, ga, rule_.points[q], scratch) -
             evaluate_field(rb, FieldKind::H, hb, eb, gb, rb_hat, scratch);
      }
      for (int k = 0; k < 3; ++k)
      {
        n.linf = std::max({n.linf, std::abs(de[k]), std::abs(dh[k])});
      }
      sum += std::abs(ga.det) * rule_.weights[q] * (dot(de, de) + dot(dh, dh));
    }
  }
  n.l2 = std::sqrt(sum);
  return n;
}

double InteriorComparison::peak(const FieldState &b) const
{
  const auto hb = averaged_h(b);
  double peak = 0.0;
  for (const auto &pair : pairs_)
  {
    const int eb = pair.second;
    const ElementGeometry gb = element_geometry(b_.mesh(), eb);
    for (int q = 0; q < static_cast<int>(rule_.size()); ++q)
    {
      const Vec3 e = tabulated(FieldKind::E, b.e, eb, gb, q);
      const Vec3 h = tabulated(FieldKind::H, hb, eb, gb, q);
      for (int k = 0; k < 3; ++k)
      {
        peak = std::max({peak, std::abs(e[k]), std::abs(h[k])});
      }
    }
  }
  return peak;
}

SimulationConfig doubled_reference(const SimulationConfig &config)
{
  if (!config.has_pml())
  {
    throw ConfigError("pml-test: the configuration has no layer");
  }
  if (!config.mesh_file.empty())
  {
    throw ConfigError("pml-test: needs a generated mesh");
  }
  SimulationConfig r = config;
  for (int k = 0; k < config.dim; ++k)
  {
    if (!(config.pml_thickness[k] > 0.0))
    {
      continue;
    }
    const double spacing = (config.outer_max()[k] - config.outer_min()[k]) / config.cells[k];
    r.box_min[k] = 2.0 * config.box_min[k];
    r.box_max[k] = 2.0 * config.box_max[k];
    r.pml_thickness[k] = 0.0;
    const double cells = (r.box_max[k] - r.box_min[k]) / spacing;
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells)
    {
      throw ConfigError("pml-test: the doubled box is not a whole number of cells");
    }
    r.cells[k] = static_cast<int>(std::lround(cells));
  }
  r.sigma = 0.0;
  r.sigma_sweep.clear();
  return r;
}

PmlTestResult cmd_pml_test(const SimulationConfig &config, std::vector<double> sigmas,
                           const std::string &out_dir)
{
  if (sigmas.empty())
  {
    sigmas = config.sigma_sweep.empty() ? std::vector<double>{config.sigma} : config.sigma_sweep;
  }
  SimulationConfig base = config;
  base.probes.clear();
  base.sigma = sigmas.front();
  base.tau = Simulation(base).tau();
  base.steps = base.step_count(*base.tau);
  base.final_time.reset();
  SimulationConfig ref_config = doubled_reference(base);
  Simulation ref(ref_config);

  std::vector<std::unique_ptr<Simulation>> runs;
  std::vector<std::unique_ptr<InteriorComparison>> cmp;
  std::vector<FieldState> states;
  for (double s : sigmas)
  {
    SimulationConfig c = base;
    c.sigma = s;
    runs.push_back(std::make_unique<Simulation>(c));
    cmp.push_back(std::make_unique<InteriorComparison>(*runs.back(), ref));
    states.push_back(runs.back()->initial_state());
  }
  FieldState rs = ref.initial_state();

  PmlTestResult out;
  out.linf.resize(sigmas.size());
  out.l2.resize(sigmas.size());
  const long steps = *base.steps;
  const long cadence = base.cadence > 0 ? base.cadence : 1;
  for (long k = 0; k <= steps; ++k)
  {
    if (k > 0)
    {
      ref.stepper().step(rs);
      for (std::size_t i = 0; i < runs.size(); ++i)
      {
        runs[i]->stepper().step(states[i]);
      }
    }
    if (k % cadence != 0 && k != steps)
    {
      continue;
    }
    out.times.push_back(rs.time);
    out.peak = std::max(out.peak, cmp.front()->peak(rs));
    for (std::size_t i = 0; i < runs.size(); ++i)
    {
      const auto n = cmp[i]->difference(states[i], rs);
      out.linf[i].push_back(n.linf);
      out.l2[i].push_back(n.l2);
    }
  }
  ref.stepper().check(rs);
  for (std::size_t i = 0; i < runs.size(); ++i)
  {
    runs[i]->stepper().check(states[i]);
    PmlSweepPoint p;
    p.sigma = sigmas[i];
    p.max_linf = *std::max_element(out.linf[i].begin(), out.linf[i].end());
    p.max_l2 = *std::max_element(out.l2[i].begin(), out.l2[i].end());
    p.relative_linf = out.peak > 0.0 ? p.max_linf / out.peak : 0.0;
    out.points.push_back(p);
    if (out.best < 0 || p.max_linf < out.points[out.best].max_linf)
    {
      out.best = static_cast<int>(i);
    }
  }
  if (!out_dir.empty())
  {
    ensure_directory(out_dir);
    ProbeSeries series;
    for (double s : sigmas)
    {
      series.columns.push_back("linf_" + fmt("%g", s));
      series.columns.push_back("l2_" + fmt("%g", s));
    }
    series.times = out.times;
    for (std::size_t t = 0; t < out.times.size(); ++t)
    {
      std::vector<double> row;
      for (std::size_t i = 0; i < sigmas.size(); ++i)
      {
        row.push_back(out.linf[i][t]);
        row.push_back(out.l2[i][t]);
      }
      series.rows.push_back(std::move(row));
    }
    write_csv((std::filesystem::path(out_dir) / "pml_series.csv").string(), series);
    const std::string path = (std::filesystem::path(out_dir) / "pml_sweep.csv").string();
    std::ofstream os(path);
    if (!os)
    {
      throw IoError("cannot write " + path);
    }
    os << "sigma,max_linf,max_l2,relative_linf\n";
    for (const auto &p : out.points)
    {
      os << fmt("%.16e", p.sigma) << "," << fmt("%.16e", p.max_linf) << ","
         << fmt("%.16e", p.max_l2) << "," << fmt("%.16e", p.relative_linf) << "\n";
    }
  }
  return out;
}

std::string cmd_info(const SimulationConfig &config, std::uint64_t seed)
{
  Simulation sim(config);
  const Mesh &m = sim.mesh();
  const FieldLayout &l = sim.op().layout();
  std::ostringstream os;
  os << "dimension        " << m.dim << "\n"
     << "degree           " << config.degree << "\n"
     << "elements         " << m.num_elements() << "\n"
     << "facets           " << m.num_facets() << "\n"
     << "vertices         " << m.num_vertices() << "\n"
     << "dofs e/h/hs      " << l.e_size() << " " << l.h_size() << " " << l.hs_size() << "\n"
     << "tau              " << fmt("%.6e", sim.tau()) << "\n"
     << "steps            " << sim.steps() << "\n";
  std::map<std::string, int> regions;
  for (const auto &r : m.regions)
  {
    ++regions[r];
  }
  os << "regions         ";
  for (const auto &[r, n] : regions)
  {
    os << " " << r << ":" << n;
  }
  os << "\nboundary tags   ";
  for (const auto &t : m.tags())
  {
    os << " " << t;
  }
  os << "\nsources          " << config.sources.size() << "\nprobes           "
     << config.probes.size() << "\n";

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto fill = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double &x : v)
    {
      x = u(rng);
    }
    return v;
  };
  const auto e = fill(l.e_size()), h = fill(l.h_size()), hs = fill(l.hs_size());
  std::vector<double> re(e.size()), rh(h.size()), rs(hs.size());
  sim.op().e_rhs(h, hs, re);
  sim.op().h_rhs(e, nullptr, 0.0, rh, rs);
  double pairing = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
  {
    pairing += e[i] * re[i];
    scale += std::abs(e[i] * re[i]);
  }
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    pairing += h[i] * rh[i];
  }
  for (std::size_t i = 0; i < hs.size(); ++i)
  {
    pairing += hs[i] * rs[i];
  }
  os << "skew check       " << fmt("%.3e", std::abs(pairing) / std::max(scale, 1e-300))
     << " (seed " << seed << ")\n";
  return os.str();
}

}  // namespace dgtd
