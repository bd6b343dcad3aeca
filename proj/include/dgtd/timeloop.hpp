// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_TIMELOOP_HPP
#define DGTD_TIMELOOP_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dgtd/common.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/operators.hpp"
#include "dgtd/pml.hpp"

namespace dgtd
{

/// Per-element material tensors.
struct Materials
{
  std::vector<Mat3> eps;
  std::vector<Mat3> mu;

  /// Isotropic values per region name; regions missing from the maps (layer
  /// regions included) take the fallback values.
  static Materials from_regions(const Mesh &mesh, const std::map<std::string, double> &eps,
                                const std::map<std::string, double> &mu, double eps_fallback = 1.0,
                                double mu_fallback = 1.0);
  static Materials uniform(const Mesh &mesh, double eps = 1.0, double mu = 1.0);
};

enum class EnvelopeKind
{
  Gaussian,      // exp(-((t - t0) / width)^2)
  Sine,          // sin(omega (t - t0)) with a raised-cosine ramp of length `ramp`
  GaussianSine,  // gaussian times sin(omega (t - t0))
};

struct Envelope
{
  EnvelopeKind kind = EnvelopeKind::Gaussian;
  double t0 = 0.0;
  double width = 1.0;
  double omega = 0.0;
  double ramp = 0.0;

  double operator()(double t) const;
  /// Throws ConfigError for non-positive widths or a gaussian that is not
  /// below 1e-12 at t = 0.
  void validate() const;
};

/// Incident field pol * g(t - dir . (x - origin) / speed) on boundary facets
/// carrying `tag`. A zero direction gives a field that is uniform in space.
struct SourceSpec
{
  std::string tag;
  Vec3 polarization{1.0, 0.0, 0.0};
  Envelope envelope;
  Vec3 direction{0.0, 0.0, 0.0};
  Vec3 origin{0.0, 0.0, 0.0};
  double speed = 1.0;

  Vec3 field(const Vec3 &x, double t) const;
  void validate() const;
};

/// Tag -> source index map for MaxwellOperator. Throws ConfigError for a tag
/// used twice.
std::map<std::string, int> incident_tag_map(const std::vector<SourceSpec> &sources);

/// safety * min over elements of inradius / (c (p+1)^2), c = 1/sqrt(eps mu)
/// from the smallest eigenvalues of the element tensors.
double stable_timestep(const Mesh &mesh, int degree, const Materials &materials,
                       double safety = 0.5);

/// Discrete state. e and p live on integer levels; h, h_s and q half a step
/// later. h_prev and hs_prev keep the previous half level for the energy.
struct FieldState
{
  std::vector<double> e, h, hs, p, q;
  std::vector<double> h_prev, hs_prev;
  long step = 0;
  double time = 0.0;
};

/// Leapfrog stepper with trapezoidal treatment of the layer damping. Facets
/// touching a damped element keep h_s = 0.
class Stepper
{
public:
  /// pml may be empty (no layer). alpha holds the penalty per facet.
  Stepper(const MaxwellOperator &op, const Materials &materials,
          const std::vector<PmlTensors> &pml, double sigma, const std::vector<double> &alpha,
          double tau, std::vector<SourceSpec> sources = {});
  Stepper(const Stepper &) = delete;
  Stepper &operator=(const Stepper &) = delete;

  const MaxwellOperator &op() const { return op_; }
  double tau() const { return tau_; }
  double sigma() const { return sigma_; }
  /// Rebuilds the damping blocks. A negative tau runs the scheme backwards.
  void set_tau(double tau);
  bool has_pml() const { return !pml_elements_.empty(); }
  const std::vector<SourceSpec> &sources() const { return sources_; }
  const IncidentFunction *incident() const { return sources_.empty() ? nullptr : &incident_; }

  const MassBlocks &e_mass() const { return m_eps_; }
  const MassBlocks &h_mass() const { return m_mu_; }
  const MassBlocks &hs_mass() const { return m_s_; }
  const MassBlocks &xi_e_mass() const { return xi_eps_; }
  const MassBlocks &xi_h_mass() const { return xi_mu_; }

  FieldState zero_state() const;

  /// Sets h_prev and hs_prev from e, h and hs by undoing the h update of the
  /// step that ends at state.time, so energy() is the discrete invariant from
  /// the first sample on. Damped elements keep their h_prev.
  void set_history(FieldState &state) const;

  /// Advances one step. Every check_interval steps the state is tested and
  /// NumericalInstability is thrown if it is not finite or has blown up.
  void step(FieldState &state) const;
  int check_interval = 1000;

  /// 1/2 (e M e + h_prev M h + hs_prev M hs); constant in a closed lossless cavity.
  double energy(const FieldState &state) const;
  /// 1/2 (e M e + hbar M hbar + hsbar M hsbar) with hbar the mean of the two h levels.
  double averaged_energy(const FieldState &state) const;

  /// Throws NumericalInstability if the state is not finite.
  void check(const FieldState &state) const;

private:
  void update_e(FieldState &s) const;
  void update_h(FieldState &s, double source_time) const;
  void update_p(FieldState &s) const;
  void update_q(FieldState &s) const;

  const MaxwellOperator &op_;
  double sigma_;
  double tau_ = 0.0;
  std::vector<SourceSpec> sources_;
  IncidentFunction incident_;
  std::vector<PmlTensors> pml_;
  std::vector<int> pml_elements_;
  std::vector<char> damped_;
  std::vector<int> unpenalized_;  // facets touching the layer carry no jump unknown
  MassBlocks m_eps_, m_mu_, m_s_;
  MassBlocks xi_eps_, xi_mu_;
  MassBlocks eps_left_, eps_right_, mu_left_, mu_right_;
  std::vector<Mat3> eps_tensor_, mu_tensor_;
  AuxCoefficients aux_;
  mutable std::vector<double> r_e_, r_h_, r_s_;
};

using TimeField = std::function<Vec3(const Vec3 &, double)>;

/// State at time t0 from analytic fields: e projected at t0, h at t0 + tau/2
/// and h_prev at t0 - tau/2; h_s and the auxiliaries start at zero. Null
/// fields are taken as zero.
FieldState project_state(const Stepper &stepper, const TimeField &e, const TimeField &h,
                         double t0 = 0.0);

/// Runs `steps` steps, calling observer(state) at step 0 and after every
/// `cadence` steps (cadence <= 0: only at step 0 and at the end).
void run(const Stepper &stepper, FieldState &state, long steps, long cadence,
         const std::function<void(const FieldState &)> &observer);

}  // namespace dgtd

#endif  // DGTD_TIMELOOP_HPP
