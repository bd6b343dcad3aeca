// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/timeloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dgtd/fields.hpp"
#include "dgtd/parallel.hpp"

namespace dgtd
{

namespace
{

Mat3 isotropic(double v) { return v * Mat3::Identity(); }

/// Symmetric part of m (I + s diag(v)).
Mat3 damped_tensor(const Mat3 &m, const Vec3 &v, double s)
{
  Mat3 d = Mat3::Identity();
  for (int a = 0; a < 3; ++a)
  {
    d(a, a) += s * v[a];
  }
  const Mat3 t = m * d;
  return 0.5 * (t + t.transpose());
}

Mat3 xi_tensor(const Mat3 &m, const Vec3 &xi)
{
  const Mat3 t = m * Eigen::Vector3d(xi[0], xi[1], xi[2]).asDiagonal();
  return 0.5 * (t + t.transpose());
}

double min_eigenvalue(const Mat3 &m)
{
  Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

void block_apply(const Mat3 &m, int comps, const double *x, double *y)
{
  for (int i = 0; i < comps; ++i)
  {
    double s = 0.0;
    for (int j = 0; j < comps; ++j)
    {
      s += m(i, j) * x[j];
    }
    y[i] = s;
  }
}

double dot_mass(const MassBlocks &mass, const std::vector<double> &a, const std::vector<double> &b)
{
  std::vector<double> mb(b.size());
  apply_mass(mass, b, mb);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    s += a[i] * mb[i];
  }
  return s;
}

/// x <- L^{-1} (R x + tau (r - aux)) on the blocks of one element, or
/// x <- x + tau M^{-1} (r - aux) when the element is not damped.
void element_update(const MassBlocks &plain, const MassBlocks &left, const MassBlocks &right,
                    bool damped, int el, double tau, double *x, const double *r,
                    const double *aux)
{
  const int c = plain.comps;
  const std::size_t off = std::size_t(el) * c * plain.modes;
  for (int m = 0; m < plain.modes; ++m)
  {
    double *xm = x + off + std::size_t(m) * c;
    const double *rm = r + off + std::size_t(m) * c;
    double rhs[3], tmp[3];
    for (int i = 0; i < c; ++i)
    {
      rhs[i] = tau * (rm[i] - (aux ? aux[off + std::size_t(m) * c + i] : 0.0));
    }
    if (damped)
    {
      block_apply(right.blocks[el], c, xm, tmp);
      for (int i = 0; i < c; ++i)
      {
        tmp[i] += rhs[i];
      }
      block_apply(left.inverses[el], c, tmp, xm);
    }
    else
    {
      block_apply(plain.inverses[el], c, rhs, tmp);
      for (int i = 0; i < c; ++i)
      {
        xm[i] += tmp[i];
      }
    }
  }
}

}  // namespace

Materials Materials::from_regions(const Mesh &mesh, const std::map<std::string, double> &eps,
                                  const std::map<std::string, double> &mu, double eps_fallback,
                                  double mu_fallback)
{
  Materials m;
  m.eps.reserve(mesh.num_elements());
  m.mu.reserve(mesh.num_elements());
  for (const auto &r : mesh.regions)
  {
    const auto ie = eps.find(r);
    const auto im = mu.find(r);
    m.eps.push_back(isotropic(ie == eps.end() ? eps_fallback : ie->second));
    m.mu.push_back(isotropic(im == mu.end() ? mu_fallback : im->second));
  }
  return m;
}

Materials Materials::uniform(const Mesh &mesh, double eps, double mu)
{
  return from_regions(mesh, {}, {}, eps, mu);
}

double Envelope::operator()(double t) const
{
  const double s = t - t0;
  switch (kind)
  {
    case EnvelopeKind::Gaussian:
      return std::exp(-(s / width) * (s / width));
    case EnvelopeKind::Sine:
    {
      if (t <= 0.0)
      {
        return 0.0;
      }
      const double r = (ramp > 0.0 && t < ramp) ? 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp))
                                                : 1.0;
      return r * std::sin(omega * s);
    }
    case EnvelopeKind::GaussianSine:
      return std::exp(-(s / width) * (s / width)) * std::sin(omega * s);
  }
  return 0.0;
}

void Envelope::validate() const
{
  if (kind == EnvelopeKind::Sine)
  {
    if (!(omega > 0.0) || !(ramp >= 0.0))
    {
      throw ConfigError("sine envelope needs omega > 0 and ramp >= 0");
    }
    return;
  }
  if (!(width > 0.0))
  {
    throw ConfigError("gaussian envelope needs width > 0");
  }
  if (std::exp(-(t0 / width) * (t0 / width)) > 1e-12)
  {
    std::ostringstream msg;
    msg << "gaussian envelope is not negligible at t = 0 (t0 / width = " << t0 / width
        << ", need at least 5.26)";
    throw ConfigError(msg.str());
  }
}

Vec3 SourceSpec::field(const Vec3 &x, double t) const
{
  const double delay = dot(direction, x - origin) / speed;
  return envelope(t - delay) * polarization;
}

void SourceSpec::validate() const
{
  if (tag.empty())
  {
    throw ConfigError("source without boundary tag");
  }
  if (!(speed > 0.0))
  {
    throw ConfigError("source speed must be positive");
  }
  const double n = norm(direction);
  if (n != 0.0 && std::abs(n - 1.0) > 1e-12)
  {
    throw ConfigError("source direction must be a unit vector");
  }
  envelope.validate();
}

std::map<std::string, int> incident_tag_map(const std::vector<SourceSpec> &sources)
{
  std::map<std::string, int> tags;
  for (std::size_t i = 0; i < sources.size(); ++i)
  {
    if (!tags.emplace(sources[i].tag, static_cast<int>(i)).second)
    {
      throw ConfigError("boundary tag '" + sources[i].tag + "' has more than one source");
    }
  }
  return tags;
}

double stable_timestep(const Mesh &mesh, int degree, const Materials &materials, double safety)
{
  if (static_cast<int>(materials.eps.size()) != mesh.num_elements() ||
      static_cast<int>(materials.mu.size()) != mesh.num_elements())
  {
    throw InvalidArgument("stable_timestep: one material per element required");
  }
  const double k = double(degree + 1) * double(degree + 1);
  double tau = std::numeric_limits<double>::infinity();
  for (int el = 0; el < mesh.num_elements(); ++el)
  {
    const ElementGeometry g = element_geometry(mesh, el);
    const double c = 1.0 / std::sqrt(min_eigenvalue(materials.eps[el]) *
                                     min_eigenvalue(materials.mu[el]));
    tau = std::min(tau, g.inradius(mesh.dim) / (c * k));
  }
  return safety * tau;
}

Stepper::Stepper(const MaxwellOperator &op, const Materials &materials,
                 const std::vector<PmlTensors> &pml, double sigma,
                 const std::vector<double> &alpha, double tau, std::vector<SourceSpec> sources)
    : op_(op), sigma_(sigma), sources_(std::move(sources)), pml_(pml),
      eps_tensor_(materials.eps), mu_tensor_(materials.mu)
{
  const Mesh &mesh = op.mesh();
  const ReferenceElement &ref = op.reference();
  const int ne = mesh.num_elements();
  if (static_cast<int>(eps_tensor_.size()) != ne || static_cast<int>(mu_tensor_.size()) != ne)
  {
    throw InvalidArgument("stepper: one material per element required");
  }
  if (!pml_.empty() && static_cast<int>(pml_.size()) != ne)
  {
    throw InvalidArgument("stepper: one layer tensor per element required");
  }
  if (static_cast<int>(alpha.size()) != mesh.num_facets())
  {
    throw InvalidArgument("stepper: one penalty value per facet required");
  }
  for (const auto &s : sources_)
  {
    s.validate();
  }
  m_eps_ = assemble_mass(mesh, ref, eps_tensor_, FieldKind::E);
  m_mu_ = assemble_mass(mesh, ref, mu_tensor_, FieldKind::H);

  std::vector<double> coef(mesh.num_facets());
  for (int f = 0; f < mesh.num_facets(); ++f)
  {
    const Facet &fc = mesh.facets[f];
    double mu = mu_tensor_[fc.owner].trace() / 3.0;
    if (!fc.boundary())
    {
      mu = 0.5 * (mu + mu_tensor_[fc.neighbor].trace() / 3.0);
    }
    if (!(alpha[f] > 0.0))
    {
      throw InvalidArgument("penalty parameter must be positive");
    }
    coef[f] = mu / alpha[f];
  }
  m_s_ = assemble_facet_mass(mesh, ref, coef);

  damped_.assign(ne, 0);
  if (!pml_.empty() && sigma_ > 0.0)
  {
    std::vector<Mat3> xe(ne, Mat3::Zero()), xh(ne, Mat3::Zero());
    for (int el = 0; el < ne; ++el)
    {
      if (pml_[el].active())
      {
        pml_elements_.push_back(el);
        damped_[el] = 1;
        xe[el] = xi_tensor(eps_tensor_[el], pml_[el].xi);
        xh[el] = xi_tensor(mu_tensor_[el], pml_[el].xi);
      }
    }
    for (int f = 0; f < mesh.num_facets(); ++f)
    {
      const Facet &fc = mesh.facets[f];
      if (damped_[fc.owner] || (!fc.boundary() && damped_[fc.neighbor]))
      {
        unpenalized_.push_back(f);
      }
    }
    xi_eps_ = assemble_mass(mesh, ref, xe, FieldKind::E, false);
    xi_mu_ = assemble_mass(mesh, ref, xh, FieldKind::H, false);
  }
  if (!sources_.empty())
  {
    incident_ = [this](int id, const Vec3 &x, double t) { return sources_[id].field(x, t); };
  }
  set_tau(tau);
}

void Stepper::set_tau(double tau)
{
  if (!(std::isfinite(tau) && tau != 0.0))
  {
    throw InvalidArgument("time step must be finite and non-zero");
  }
  tau_ = tau;
  aux_ = aux_coefficients(sigma_, tau_);
  if (pml_elements_.empty())
  {
    return;
  }
  const Mesh &mesh = op_.mesh();
  const ReferenceElement &ref = op_.reference();
  const int ne = mesh.num_elements();
  std::vector<Mat3> el(ne), er(ne), hl(ne), hr(ne);
  for (int e = 0; e < ne; ++e)
  {
    const Vec3 eta = pml_.empty() ? Vec3{0.0, 0.0, 0.0} : pml_[e].eta;
    el[e] = damped_tensor(eps_tensor_[e], eta, 0.5 * tau_);
    er[e] = damped_tensor(eps_tensor_[e], eta, -0.5 * tau_);
    hl[e] = damped_tensor(mu_tensor_[e], eta, 0.5 * tau_);
    hr[e] = damped_tensor(mu_tensor_[e], eta, -0.5 * tau_);
  }
  try
  {
    eps_left_ = assemble_mass(mesh, ref, el, FieldKind::E);
    mu_left_ = assemble_mass(mesh, ref, hl, FieldKind::H);
  }
  catch (const InvalidArgument &)
  {
    throw ConfigError("layer damping too strong for the time step (need sigma * tau < 2)");
  }
  eps_right_ = assemble_mass(mesh, ref, er, FieldKind::E, false);
  mu_right_ = assemble_mass(mesh, ref, hr, FieldKind::H, false);
}

FieldState Stepper::zero_state() const
{
  const FieldLayout &l = op_.layout();
  FieldState s;
  s.e.assign(l.e_size(), 0.0);
  s.h.assign(l.h_size(), 0.0);
  s.hs.assign(l.hs_size(), 0.0);
  s.p.assign(l.e_size(), 0.0);
  s.q.assign(l.h_size(), 0.0);
  s.h_prev = s.h;
  s.hs_prev = s.hs;
  return s;
}

void Stepper::set_history(FieldState &s) const
{
  std::vector<double> rh(s.h.size()), rs(s.hs.size());
  op_.h_rhs(s.e, incident(), s.time, rh, rs);
  std::vector<double> h = s.h, hs = s.hs;
  for (int el = 0; el < op_.layout().num_elements; ++el)
  {
    if (!damped_[el])
    {
      element_update(m_mu_, m_mu_, m_mu_, false, el, -tau_, h.data(), rh.data(), nullptr);
    }
  }
  for (int f = 0; f < op_.layout().num_facets; ++f)
  {
    element_update(m_s_, m_s_, m_s_, false, f, -tau_, hs.data(), rs.data(), nullptr);
  }
  const std::size_t stride = op_.layout().hs_stride();
  for (int f : unpenalized_)
  {
    std::fill_n(hs.begin() + f * stride, stride, 0.0);
  }
  for (int el = 0; el < op_.layout().num_elements; ++el)
  {
    if (!damped_[el])
    {
      const std::size_t n = op_.layout().h_stride();
      std::copy_n(h.begin() + el * n, n, s.h_prev.begin() + el * n);
    }
  }
  s.hs_prev = std::move(hs);
}

void Stepper::update_e(FieldState &s) const
{
  r_e_.resize(s.e.size());
  op_.e_rhs(s.h, s.hs, r_e_);
  const bool aux = !pml_elements_.empty();
  parallel_for(op_.layout().num_elements, op_.workers(), [&](int begin, int end) {
    for (int el = begin; el < end; ++el)
    {
      element_update(m_eps_, eps_left_, eps_right_, damped_[el], el, tau_, s.e.data(),
                     r_e_.data(), aux ? s.p.data() : nullptr);
    }
  });
}

void Stepper::update_h(FieldState &s, double source_time) const
{
  r_h_.resize(s.h.size());
  r_s_.resize(s.hs.size());
  op_.h_rhs(s.e, incident(), source_time, r_h_, r_s_);
  s.h_prev = s.h;
  s.hs_prev = s.hs;
  const bool aux = !pml_elements_.empty();
  parallel_for(op_.layout().num_elements, op_.workers(), [&](int begin, int end) {
    for (int el = begin; el < end; ++el)
    {
      element_update(m_mu_, mu_left_, mu_right_, damped_[el], el, tau_, s.h.data(), r_h_.data(),
                     aux ? s.q.data() : nullptr);
    }
  });
  parallel_for(op_.layout().num_facets, op_.workers(), [&](int begin, int end) {
    for (int f = begin; f < end; ++f)
    {
      element_update(m_s_, m_s_, m_s_, false, f, tau_, s.hs.data(), r_s_.data(), nullptr);
    }
  });
  const std::size_t stride = op_.layout().hs_stride();
  for (int f : unpenalized_)
  {
    std::fill_n(s.hs.begin() + f * stride, stride, 0.0);
  }
}

void Stepper::update_p(FieldState &s) const
{
  const int c = xi_eps_.comps;
  for (int el : pml_elements_)
  {
    const std::size_t off = std::size_t(el) * c * xi_eps_.modes;
    for (int m = 0; m < xi_eps_.modes; ++m)
    {
      double f[3];
      block_apply(xi_eps_.blocks[el], c, s.e.data() + off + m * c, f);
      for (int i = 0; i < c; ++i)
      {
        double &p = s.p[off + m * c + i];
        p = aux_.gamma * p + aux_.beta * tau_ * f[i];
      }
    }
  }
}

void Stepper::update_q(FieldState &s) const
{
  const int c = xi_mu_.comps;
  for (int el : pml_elements_)
  {
    const std::size_t off = std::size_t(el) * c * xi_mu_.modes;
    for (int m = 0; m < xi_mu_.modes; ++m)
    {
      double f[3];
      block_apply(xi_mu_.blocks[el], c, s.h.data() + off + m * c, f);
      for (int i = 0; i < c; ++i)
      {
        double &q = s.q[off + m * c + i];
        q = aux_.gamma * q + aux_.beta * tau_ * f[i];
      }
    }
  }
}

void Stepper::step(FieldState &s) const
{
  if (tau_ > 0.0)
  {
    update_e(s);
    update_h(s, s.time + tau_);
    update_p(s);
    update_q(s);
    ++s.step;
  }
  else
  {
    // Exact reverse of the forward sequence.
    update_q(s);
    update_p(s);
    update_h(s, s.time);
    update_e(s);
    --s.step;
  }
  s.time += tau_;
  if (check_interval > 0 && s.step % check_interval == 0)
  {
    check(s);
  }
}

void Stepper::check(const FieldState &s) const
{
  double sum = 0.0;
  for (const auto *v : {&s.e, &s.h, &s.hs, &s.p, &s.q})
  {
    for (double x : *v)
    {
      sum += x * x;
    }
  }
  if (!std::isfinite(sum) || sum > 1e200)
  {
    std::ostringstream msg;
    msg << "numerical instability detected at step " << s.step << " (t = " << s.time << ")";
    throw NumericalInstability(msg.str(), s.step);
  }
}

double Stepper::energy(const FieldState &s) const
{
  return 0.5 * (dot_mass(m_eps_, s.e, s.e) + dot_mass(m_mu_, s.h_prev, s.h) +
                dot_mass(m_s_, s.hs_prev, s.hs));
}

double Stepper::averaged_energy(const FieldState &s) const
{
  std::vector<double> h(s.h.size()), hs(s.hs.size());
  for (std::size_t i = 0; i < h.size(); ++i)
  {
    h[i] = 0.5 * (s.h[i] + s.h_prev[i]);
  }
  for (std::size_t i = 0; i < hs.size(); ++i)
  {
    hs[i] = 0.5 * (s.hs[i] + s.hs_prev[i]);
  }
  return 0.5 * (dot_mass(m_eps_, s.e, s.e) + dot_mass(m_mu_, h, h) + dot_mass(m_s_, hs, hs));
}

FieldState project_state(const Stepper &stepper, const TimeField &e, const TimeField &h,
                         double t0)
{
  const Mesh &mesh = stepper.op().mesh();
  const ReferenceElement &ref = stepper.op().reference();
  FieldState s = stepper.zero_state();
  const double tau = stepper.tau();
  if (e)
  {
    s.e = project_field(mesh, ref, FieldKind::E, [&](const Vec3 &x) { return e(x, t0); });
  }
  if (h)
  {
    s.h = project_field(mesh, ref, FieldKind::H,
                        [&](const Vec3 &x) { return h(x, t0 + 0.5 * tau); });
    s.h_prev = project_field(mesh, ref, FieldKind::H,
                             [&](const Vec3 &x) { return h(x, t0 - 0.5 * tau); });
  }
  s.time = t0;
  stepper.set_history(s);
  return s;
}

void run(const Stepper &stepper, FieldState &state, long steps, long cadence,
         const std::function<void(const FieldState &)> &observer)
{
  if (observer)
  {
    observer(state);
  }
  for (long k = 1; k <= steps; ++k)
  {
    stepper.step(state);
    const bool sample = cadence > 0 ? (k % cadence == 0) : (k == steps);
    if (observer && sample)
    {
      observer(state);
    }
  }
}

}  // namespace dgtd
