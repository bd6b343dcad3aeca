// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_DRIVER_HPP
#define DGTD_DRIVER_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dgtd/config.hpp"
#include "dgtd/operators.hpp"
#include "dgtd/postproc.hpp"
#include "dgtd/reference_element.hpp"
#include "dgtd/timeloop.hpp"

namespace dgtd
{

/// Standing mode of a PEC box. 2D: TE_mn with h_z = A cos(k_x x) cos(k_y y)
/// cos(wt). 3D: TM_mn0 with e_z = A sin(k_x x) sin(k_y y) cos(wt).
/// Coordinates are relative to lo.
struct CavityMode
{
  int dim = 2;
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{1.0, 1.0, 1.0};
  int m = 1, n = 1;
  double amplitude = 1.0;

  double omega() const;
  Vec3 e(const Vec3 &x, double t) const;
  Vec3 h(const Vec3 &x, double t) const;
};

/// Mesh of a configuration with layer regions classified.
Mesh build_mesh(const SimulationConfig &config);

/// Everything needed to step one configuration.
class Simulation
{
public:
  explicit Simulation(SimulationConfig config);

  const SimulationConfig &config() const { return config_; }
  const Mesh &mesh() const { return *mesh_; }
  const ReferenceElement &reference() const { return *ref_; }
  const MaxwellOperator &op() const { return *op_; }
  const Materials &materials() const { return materials_; }
  const Stepper &stepper() const { return *stepper_; }
  Stepper &stepper() { return *stepper_; }
  double tau() const { return stepper_->tau(); }
  long steps() const { return config_.step_count(tau()); }
  std::vector<Probe> &probes() { return probes_; }
  const std::vector<Probe> &probes() const { return probes_; }
  /// Elements outside the layer.
  const std::vector<int> &interior_elements() const { return interior_; }

  FieldState initial_state() const;
  /// Staggered energy of e and h restricted to the interior elements.
  double interior_energy(const FieldState &state) const;

private:
  SimulationConfig config_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<ReferenceElement> ref_;
  std::unique_ptr<MaxwellOperator> op_;
  Materials materials_;
  std::unique_ptr<Stepper> stepper_;
  std::vector<Probe> probes_;
  std::vector<int> interior_;
};

struct RunSummary
{
  long steps = 0;
  double time = 0.0;
  double tau = 0.0;
  int elements = 0;
  long dofs = 0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double max_energy = 0.0;
  double final_interior_energy = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> files;
};

/// Runs a configuration and writes probes.csv, energy.csv, VTK snapshots and
/// summary.json into out_dir (the configured directory when empty).
RunSummary cmd_run(const SimulationConfig &config, const std::string &out_dir = {});

std::string summary_json(const RunSummary &summary, bool with_timing = true);

struct ConvergenceRow
{
  int degree = 0;
  double h = 0.0;
  double error_e = 0.0;
  double error_h = 0.0;
  double ratio = 0.0;  // previous combined error over this one, NaN in the first row
};

/// Cavity-mode errors after one period (or final_time) for degrees pmin..pmax.
/// Writes a CSV when csv_path is not empty.
std::vector<ConvergenceRow> cmd_convergence(const SimulationConfig &config, int pmin, int pmax,
                                            const std::string &csv_path = {});

/// Interior difference between two runs whose interior elements coincide.
class InteriorComparison
{
public:
  InteriorComparison(const Simulation &a, const Simulation &b);

  struct Norms
  {
    double linf = 0.0;
    double l2 = 0.0;
  };
  Norms difference(const FieldState &a, const FieldState &b) const;
  /// Largest field component of b over the compared points.
  double peak(const FieldState &b) const;

private:
  // Field of element el at rule point q from the tabulated basis.
  Vec3 tabulated(FieldKind kind, std::span<const double> coeffs, int el, const ElementGeometry &g,
                 int q) const;

  const Simulation &a_;
  const Simulation &b_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<char> same_;  // identical affine maps
  QuadratureRule rule_;
  RowMatrix phi_e_, phi_h_;
};

struct PmlSweepPoint
{
  double sigma = 0.0;
  double max_linf = 0.0;
  double max_l2 = 0.0;
  double relative_linf = 0.0;  // max_linf over the reference peak
};

struct PmlTestResult
{
  std::vector<double> times;
  std::vector<std::vector<double>> linf;  // [sigma][sample]
  std::vector<std::vector<double>> l2;
  std::vector<PmlSweepPoint> points;
  double peak = 0.0;
  int best = -1;
};

/// Reference run on the domain doubled along the layered axes, without layer,
/// compared with the layered run for every sigma. Writes pml_series.csv and
/// pml_sweep.csv into out_dir when not empty.
PmlTestResult cmd_pml_test(const SimulationConfig &config, std::vector<double> sigmas,
                           const std::string &out_dir = {});

/// The reference configuration of cmd_pml_test.
SimulationConfig doubled_reference(const SimulationConfig &config);

/// Mesh and discretization summary plus a randomized skew-adjointness check.
std::string cmd_info(const SimulationConfig &config, std::uint64_t seed);

}  // namespace dgtd

#endif  // DGTD_DRIVER_HPP
