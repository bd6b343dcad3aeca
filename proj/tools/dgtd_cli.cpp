// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dgtd/dgtd.h"

namespace
{

struct Options
{
  std::string config;
  std::optional<long> steps;
  std::optional<double> tau;
  std::optional<double> sigma;
  std::string out;
  std::optional<int> workers;
  unsigned long long seed = 1;
  int pmin = 1;
  int pmax = 5;
  std::vector<double> sweep;
};

int exit_code(dgtd_status s)
{
  switch (s)
  {
    case DGTD_OK:
      return 0;
    case DGTD_CONFIG:
    case DGTD_INVALID_ARGUMENT:
    case DGTD_MESH:
      return 2;
    case DGTD_INSTABILITY:
      return 3;
    default:
      return 1;
  }
}

class Failure
{
public:
  explicit Failure(dgtd_status s) : status(s) {}
  dgtd_status status;
};

void check(dgtd_status s)
{
  if (s != DGTD_OK)
  {
    throw Failure(s);
  }
}

std::string number(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Loads the configuration and applies the command-line overrides.
dgtd_config *load(const Options &o)
{
  dgtd_config *c = nullptr;
  check(dgtd_config_load(o.config.c_str(), &c));
  try
  {
    if (o.steps)
    {
      check(dgtd_config_set(c, "time", "final_time", "none"));
      check(dgtd_config_set(c, "time", "steps", std::to_string(*o.steps).c_str()));
    }
    if (o.tau)
    {
      check(dgtd_config_set(c, "time", "tau", number(*o.tau).c_str()));
    }
    if (o.sigma)
    {
      check(dgtd_config_set(c, "pml", "sigma", number(*o.sigma).c_str()));
    }
    if (o.workers)
    {
      check(dgtd_config_set(c, "discretization", "workers", std::to_string(*o.workers).c_str()));
    }
    if (!o.out.empty())
    {
      check(dgtd_config_set(c, "output", "directory", o.out.c_str()));
    }
  }
  catch (const Failure &)
  {
    dgtd_config_free(c);
    throw;
  }
  return c;
}

std::string output_dir(dgtd_config *c)
{
  std::size_t n = 0;
  check(dgtd_config_dump(c, nullptr, 0, &n));
  std::string text(n, '\0');
  check(dgtd_config_dump(c, text.data(), n, nullptr));
  std::istringstream is(text.c_str());
  std::string line, section;
  while (std::getline(is, line))
  {
    if (!line.empty() && line[0] == '[')
    {
      section = line;
    }
    else if (section == "[output]" && line.rfind("directory = ", 0) == 0)
    {
      return line.substr(12);
    }
  }
  return "out";
}

int run(const Options &o)
{
  dgtd_config *c = load(o);
  dgtd_run_summary s{};
  const dgtd_status st = dgtd_run(c, nullptr, &s);
  const std::string dir = st == DGTD_OK ? output_dir(c) : "";
  dgtd_config_free(c);
  check(st);
  std::printf("steps %ld  time %.6g  tau %.6g  elements %d  dofs %ld\n", s.steps, s.time, s.tau,
              s.elements, s.dofs);
  std::printf("energy initial %.10e  final %.10e  interior %.10e\n", s.initial_energy,
              s.final_energy, s.final_interior_energy);
  std::printf("wall %.3f s, outputs in %s\n", s.wall_seconds, dir.c_str());
  return 0;
}

int convergence(const Options &o)
{
  dgtd_config *c = load(o);
  std::string csv;
  dgtd_status st = DGTD_OK;
  try
  {
    csv = output_dir(c) + "/convergence.csv";
  }
  catch (const Failure &f)
  {
    st = f.status;
  }
  if (st == DGTD_OK)
  {
    st = dgtd_convergence(c, o.pmin, o.pmax, csv.c_str());
  }
  dgtd_config_free(c);
  check(st);
  std::ifstream is(csv);
  std::cout << is.rdbuf();
  return 0;
}

int pml_test(const Options &o)
{
  dgtd_config *c = load(o);
  std::string dir;
  double best = 0.0, rel = 0.0;
  dgtd_status st = DGTD_OK;
  try
  {
    dir = output_dir(c);
  }
  catch (const Failure &f)
  {
    st = f.status;
  }
  if (st == DGTD_OK)
  {
    st = dgtd_pml_test(c, o.sweep.data(), static_cast<int>(o.sweep.size()), dir.c_str(), &best,
                       &rel);
  }
  dgtd_config_free(c);
  check(st);
  std::ifstream is(dir + "/pml_sweep.csv");
  std::cout << is.rdbuf();
  std::printf("best sigma %g, relative interior difference %.3e\n", best, rel);
  return 0;
}

int info(const Options &o)
{
  dgtd_config *c = load(o);
  std::size_t n = 0;
  dgtd_status st = dgtd_info(c, o.seed, nullptr, 0, &n);
  std::string text(n, '\0');
  if (st == DGTD_OK)
  {
    st = dgtd_info(c, o.seed, text.data(), n, nullptr);
  }
  dgtd_config_free(c);
  check(st);
  std::fputs(text.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"dgtd: discontinuous Galerkin time-domain Maxwell solver (normalized units c = 1)"};
  app.footer(std::string("Configuration file format:\n") + dgtd_config_reference());
  app.require_subcommand(1);
  app.set_version_flag("--version", dgtd_version());

  Options o;
  const auto common = [&](CLI::App *sub) {
    sub->add_option("--config", o.config, "configuration file")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--steps", o.steps, "override [time] steps");
    sub->add_option("--tau", o.tau, "override [time] tau");
    sub->add_option("--sigma", o.sigma, "override [pml] sigma");
    sub->add_option("--out", o.out, "override [output] directory");
    sub->add_option("--workers", o.workers, "override [discretization] workers");
    sub->add_option("--seed", o.seed, "seed of randomized checks");
  };
  CLI::App *run_cmd = app.add_subcommand("run", "time-step a configuration");
  common(run_cmd);
  CLI::App *conv_cmd = app.add_subcommand("convergence", "cavity-mode error table over degrees");
  common(conv_cmd);
  conv_cmd->add_option("--pmin", o.pmin, "lowest degree")->check(CLI::Range(0, 15));
  conv_cmd->add_option("--pmax", o.pmax, "highest degree")->check(CLI::Range(0, 15));
  CLI::App *pml_cmd = app.add_subcommand("pml-test", "layer reflection against a doubled domain");
  common(pml_cmd);
  pml_cmd->add_option("--sweep", o.sweep, "sigma values (default [pml] sweep)");
  CLI::App *info_cmd = app.add_subcommand("info", "mesh and discretization summary");
  common(info_cmd);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try
  {
    if (*run_cmd)
    {
      return run(o);
    }
    if (*conv_cmd)
    {
      return convergence(o);
    }
    if (*pml_cmd)
    {
      return pml_test(o);
    }
    return info(o);
  }
  catch (const Failure &f)
  {
    std::fprintf(stderr, "dgtd: %s: %s\n", dgtd_status_string(f.status), dgtd_last_error());
    return exit_code(f.status);
  }
}
