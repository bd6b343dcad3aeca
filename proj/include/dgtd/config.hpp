// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DGTD_CONFIG_HPP
#define DGTD_CONFIG_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dgtd/common.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/postproc.hpp"
#include "dgtd/timeloop.hpp"

namespace dgtd
{

enum class InitialKind
{
  None,
  Cavity,    // standing mode of the PEC box
  Gaussian,  // exp(-|r|^2 / width^2), r = x - center or its component along direction
};

struct InitialSpec
{
  InitialKind kind = InitialKind::None;
  std::array<int, 2> mode{1, 1};
  double amplitude = 1.0;
  std::string field = "h";  // gaussian: "e", "h" or "curl" (e = width grad g x polarization)
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 direction{0.0, 0.0, 0.0};  // unit normal of a planar profile; zero: radial
  double width = 0.1;
  Vec3 polarization{0.0, 0.0, 1.0};
};

struct NamedSource
{
  std::string name;
  SourceSpec spec;
  int line = 0;
};

struct SimulationConfig
{
  // [domain]
  int dim = 2;
  Vec3 box_min{0.0, 0.0, 0.0};
  Vec3 box_max{1.0, 1.0, 1.0};
  Vec3 pml_thickness{0.0, 0.0, 0.0};
  bool has_hole = false;
  Vec3 hole_min{0.0, 0.0, 0.0};
  Vec3 hole_max{0.0, 0.0, 0.0};
  std::string hole_tag = "incidentfield";

  // [mesh]
  std::array<int, 3> cells{4, 4, 4};  // over the outer box
  std::string mesh_file;

  // [discretization]
  int degree = 2;
  double kappa = 1.0;
  int quadrature_bump = 0;
  int workers = 1;

  // [materials]
  std::map<std::string, double> eps;
  std::map<std::string, double> mu;
  std::map<std::string, int> material_lines;

  // [pml]
  double sigma = 0.0;
  std::vector<double> sigma_sweep;

  // [time]
  std::optional<double> tau;  // empty: automatic
  std::optional<long> steps;
  std::optional<double> final_time;
  double safety = 0.5;

  // [initial]
  InitialSpec initial;

  // [sources], [probes]
  std::vector<NamedSource> sources;
  std::vector<Probe> probes;

  // [output]
  std::string directory = "out";
  long cadence = 10;
  bool csv = true;
  long vtk_every = 0;  // 0: final state only when vtk is set
  bool vtk = false;
  bool vtk_subsample = false;

  /// Box meshed by the generator: the interior box grown by the layer thickness.
  Vec3 outer_min() const;
  Vec3 outer_max() const;
  bool has_pml() const;
  StretchSpec stretch() const;
  /// Number of steps for a given step size.
  long step_count(double tau_value) const;
  std::vector<SourceSpec> source_specs() const;

  /// Throws ConfigError for inconsistent values.
  void validate() const;
};

/// Line-oriented format with [section] headers, key = value pairs and '#'
/// comments. Unknown keys and malformed values raise ConfigError with the line.
SimulationConfig parse_config(const std::string &text, const std::string &origin = "<string>");
/// Reads a file; a relative [mesh] file is taken relative to its directory.
SimulationConfig load_config(const std::string &path);

/// Canonical text that parses back to an equal configuration.
std::string dump_config(const SimulationConfig &config);

/// Applies one key of the file format, e.g. ("pml", "sigma", "5").
void set_config_value(SimulationConfig &config, const std::string &section,
                      const std::string &key, const std::string &value);

/// Checks region and boundary names used by the configuration against a mesh.
void check_tags(const SimulationConfig &config, const Mesh &mesh);

/// Documentation of every key with its default, for --help.
std::string config_reference();

}  // namespace dgtd

#endif  // DGTD_CONFIG_HPP
