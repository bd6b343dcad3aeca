// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "dgtd/config.hpp"
#include "dgtd/driver.hpp"

using namespace dgtd;

namespace
{

std::string error_of(const std::string &text)
{
  try
  {
    parse_config(text, "cfg");
  }
  catch (const ConfigError &e)
  {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config is fully defaulted")
{
  const SimulationConfig c = parse_config("[domain]\ndim = 2\n");
  CHECK(c.dim == 2);
  CHECK(c.degree == 2);
  CHECK(c.kappa == 1.0);
  CHECK(!c.tau);
  CHECK(c.step_count(0.1) == 100);
  CHECK(c.sigma == 0.0);
  CHECK(!c.has_pml());
  CHECK(c.sources.empty());
  CHECK(c.probes.empty());
  CHECK(c.initial.kind == InitialKind::None);
  CHECK(c.directory == "out");
}

TEST_CASE("errors name the key and line")
{
  const std::string e = error_of("[domain]\ndim = 2\n[pml]\nsigm a = 5\n");
  CHECK(e.find("cfg:4:") != std::string::npos);
  CHECK(e.find("'sigm a'") != std::string::npos);
  CHECK(e.find("unknown key") != std::string::npos);

  const std::string t = error_of("[domain]\ndim = 2\n[time]\nsteps = ten\n");
  CHECK(t.find("cfg:4:") != std::string::npos);
  CHECK(t.find("'steps'") != std::string::npos);
  CHECK(t.find("integer") != std::string::npos);

  CHECK(error_of("[mesh]\ncells = 2\n").find("missing mandatory key [domain] dim") !=
        std::string::npos);
  CHECK(error_of("[domain]\ndim = 2\n[time]\nsteps = 5\nfinal_time = 1\n").find("exactly one") !=
        std::string::npos);
  CHECK(error_of("[domain]\ndim = 2\n[time]\ntau = 0.1\ntau = auto\n").find("duplicate") !=
        std::string::npos);
  CHECK(error_of("[domain]\ndim = 2\n[fields]\n").find("unknown section") != std::string::npos);
  CHECK(error_of("[domain]\ndim = 4\n").find("dim must be 2 or 3") != std::string::npos);
  CHECK(error_of("[domain]\ndim = 2\nbox_min = 0 0\npml_thickness = 0.1\n").find("centered") !=
        std::string::npos);
  const std::string reused = "[domain]\ndim = 2\n[sources]\na.tag = x\na.t0 = 6\nb.tag = x\nb.t0 = 6\n";
  CHECK(error_of(reused).find("reuses tag") != std::string::npos);
  CHECK(error_of("[domain]\ndim = 2\n[sources]\na.envelope = gaussian\n").find("no tag") !=
        std::string::npos);
  CHECK(error_of("dim = 2\n").find("outside of a section") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), IoError);
}

TEST_CASE("round trip through a dump")
{
  const std::string text = R"(
[domain]
dim = 2
box_min = -0.5 -0.5
box_max = 0.5 0.5
pml_thickness = 0.1 0
[mesh]
cells = 12 10
[discretization]
degree = 4
kappa = 2.5
[materials]
eps.air = 1
mu.air = 1
[pml]
sigma = 5
sweep = 0 5 10
[time]
tau = 0.001
final_time = 1.5
[initial]
kind = gaussian
center = 0.2 0
width = 0.15
[sources]
left.tag = xmin
left.envelope = gaussian_sine
left.t0 = 1.5
left.width = 0.25
left.omega = 12
left.polarization = 0 1 0
left.direction = 1 0 0
left.origin = -0.6 0
[probes]
a.point = 0.1 0.2
port.from = 0.3 -0.5
port.to = 0.3 0.5
port.points = 6
port.quantity = e
[output]
directory = results
cadence = 5
vtk = true
)";
  const SimulationConfig c = parse_config(text);
  CHECK(c.sigma == 5.0);
  CHECK(*c.tau == 0.001);
  const SimulationConfig r = parse_config(dump_config(c));
  CHECK(r.sigma == 5.0);
  CHECK(*r.tau == 0.001);
  CHECK(dump_config(r) == dump_config(c));
  CHECK(r.pml_thickness == c.pml_thickness);
  CHECK(r.cells[0] == 12);
  CHECK(r.cells[1] == 10);
  CHECK(r.sigma_sweep == c.sigma_sweep);
  CHECK(*r.final_time == 1.5);
  CHECK(r.sources.size() == 1);
  CHECK(r.sources[0].spec.envelope.kind == EnvelopeKind::GaussianSine);
  CHECK(r.sources[0].spec.polarization == c.sources[0].spec.polarization);
  CHECK(r.probes.size() == 2);
  CHECK(r.probes[1].segment);
  CHECK(r.probes[1].points == 6);
  CHECK(r.probes[1].quantity == ProbeQuantity::E);
  CHECK(r.initial.kind == InitialKind::Gaussian);
  CHECK(r.directory == "results");
  CHECK(r.vtk);

  SimulationConfig s = c;
  set_config_value(s, "pml", "sigma", "7.5");
  CHECK(s.sigma == 7.5);
  CHECK_THROWS_AS(set_config_value(s, "pml", "sigm a", "1"), ConfigError);
}

TEST_CASE("dangling tags are caught before any compute")
{
  SimulationConfig c = parse_config("[domain]\ndim = 2\n[sources]\nin.tag = inlet\nin.t0 = 6\n");
  try
  {
    Simulation sim(c);
    FAIL("expected a ConfigError");
  }
  catch (const ConfigError &e)
  {
    CHECK(std::string(e.what()).find("'inlet'") != std::string::npos);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  c = parse_config("[domain]\ndim = 2\n[materials]\neps.glass = 2.25\n");
  CHECK_THROWS_AS(Simulation{c}, ConfigError);
  c = parse_config("[domain]\ndim = 2\n[sources]\nin.tag = xmin\nin.t0 = 6\n");
  CHECK_NOTHROW(Simulation{c});
}

TEST_CASE("reference text lists every section")
{
  const std::string ref = config_reference();
  for (const char *s : {"[domain]", "[mesh]", "[discretization]", "[materials]", "[pml]",
                        "[time]", "[initial]", "[sources]", "[probes]", "[output]"})
  {
    CHECK(ref.find(s) != std::string::npos);
  }
}

TEST_CASE("mesh files are relative to the configuration file")
{
  const auto dir = std::filesystem::temp_directory_path() / "dgtd_config_rel";
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "a.cfg");
    os << "[domain]\ndim = 2\n[mesh]\nfile = meshes/m.msh\n";
  }
  const SimulationConfig c = load_config((dir / "a.cfg").string());
  CHECK(c.mesh_file == (dir / "meshes/m.msh").string());
  {
    std::ofstream os(dir / "b.cfg");
    os << "[domain]\ndim = 2\n[mesh]\nfile = /abs/m.msh\n";
  }
  CHECK(load_config((dir / "b.cfg").string()).mesh_file == "/abs/m.msh");
  CHECK_THROWS_AS(load_config((dir / "missing.cfg").string()), IoError);
}
