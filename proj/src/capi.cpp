// Copyright The dgtd Authors
// SPDX-License-Identifier: Apache-2.0

#include "dgtd/dgtd.h"

#include <cstring>
#include <exception>
#include <string>

#include "dgtd/driver.hpp"

struct dgtd_config
{
  dgtd::SimulationConfig value;
};

struct dgtd_simulation
{
  explicit dgtd_simulation(const dgtd::SimulationConfig &c) : sim(c), state(sim.initial_state()) {}

  dgtd::Simulation sim;
  dgtd::FieldState state;
};

namespace
{

thread_local std::string last_error;

template <class F>
dgtd_status guarded(F &&f)
{
  try
  {
    last_error.clear();
    f();
    return DGTD_OK;
  }
  catch (const dgtd::InvalidArgument &e)
  {
    last_error = e.what();
    return DGTD_INVALID_ARGUMENT;
  }
  catch (const dgtd::ConfigError &e)
  {
    last_error = e.what();
    return DGTD_CONFIG;
  }
  catch (const dgtd::NumericalInstability &e)
  {
    last_error = e.what();
    return DGTD_INSTABILITY;
  }
  catch (const dgtd::IoError &e)
  {
    last_error = e.what();
    return DGTD_IO;
  }
  catch (const dgtd::MeshError &e)
  {
    last_error = e.what();
    return DGTD_MESH;
  }
  catch (const std::exception &e)
  {
    last_error = e.what();
    return DGTD_INTERNAL;
  }
  catch (...)
  {
    last_error = "unknown error";
    return DGTD_INTERNAL;
  }
}

void require(bool ok, const char *what)
{
  if (!ok)
  {
    throw dgtd::InvalidArgument(what);
  }
}

void copy_out(const std::string &s, char *buffer, std::size_t capacity, std::size_t *needed)
{
  if (needed)
  {
    *needed = s.size() + 1;
  }
  if (buffer && capacity > 0)
  {
    const std::size_t n = std::min(s.size(), capacity - 1);
    std::memcpy(buffer, s.data(), n);
    buffer[n] = '\0';
  }
}

}  // namespace

extern "C" {

const char *dgtd_version(void)
{
  return "1.0.0";
}

const char *dgtd_status_string(dgtd_status status)
{
  switch (status)
  {
    case DGTD_OK:
      return "ok";
    case DGTD_INVALID_ARGUMENT:
      return "invalid argument";
    case DGTD_CONFIG:
      return "configuration error";
    case DGTD_INSTABILITY:
      return "numerical instability";
    case DGTD_IO:
      return "i/o error";
    case DGTD_MESH:
      return "mesh error";
    case DGTD_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char *dgtd_last_error(void)
{
  return last_error.c_str();
}

dgtd_status dgtd_config_load(const char *path, dgtd_config **out)
{
  return guarded([&] {
    require(path && out, "dgtd_config_load: null argument");
    *out = new dgtd_config{dgtd::load_config(path)};
  });
}

dgtd_status dgtd_config_parse(const char *text, dgtd_config **out)
{
  return guarded([&] {
    require(text && out, "dgtd_config_parse: null argument");
    *out = new dgtd_config{dgtd::parse_config(text)};
  });
}

dgtd_status dgtd_config_set(dgtd_config *config, const char *section, const char *key,
                            const char *value)
{
  return guarded([&] {
    require(config && section && key && value, "dgtd_config_set: null argument");
    dgtd::SimulationConfig c = config->value;
    dgtd::set_config_value(c, section, key, value);
    c.validate();
    config->value = std::move(c);
  });
}

dgtd_status dgtd_config_dump(const dgtd_config *config, char *buffer, size_t capacity,
                             size_t *needed)
{
  return guarded([&] {
    require(config, "dgtd_config_dump: null config");
    copy_out(dgtd::dump_config(config->value), buffer, capacity, needed);
  });
}

const char *dgtd_config_reference(void)
{
  static const std::string text = dgtd::config_reference();
  return text.c_str();
}

void dgtd_config_free(dgtd_config *config)
{
  delete config;
}

dgtd_status dgtd_run(const dgtd_config *config, const char *out_dir, dgtd_run_summary *summary)
{
  return guarded([&] {
    require(config, "dgtd_run: null config");
    const dgtd::RunSummary s = dgtd::cmd_run(config->value, out_dir ? out_dir : "");
    if (summary)
    {
      summary->steps = s.steps;
      summary->time = s.time;
      summary->tau = s.tau;
      summary->elements = s.elements;
      summary->dofs = s.dofs;
      summary->initial_energy = s.initial_energy;
      summary->final_energy = s.final_energy;
      summary->max_energy = s.max_energy;
      summary->final_interior_energy = s.final_interior_energy;
      summary->wall_seconds = s.wall_seconds;
    }
  });
}

dgtd_status dgtd_convergence(const dgtd_config *config, int pmin, int pmax, const char *csv_path)
{
  return guarded([&] {
    require(config, "dgtd_convergence: null config");
    dgtd::cmd_convergence(config->value, pmin, pmax, csv_path ? csv_path : "");
  });
}

dgtd_status dgtd_pml_test(const dgtd_config *config, const double *sigmas, int count,
                          const char *out_dir, double *best_sigma, double *best_relative)
{
  return guarded([&] {
    require(config, "dgtd_pml_test: null config");
    require(count >= 0 && (count == 0 || sigmas), "dgtd_pml_test: invalid sigma list");
    std::vector<double> list(sigmas, sigmas + count);
    const auto r = dgtd::cmd_pml_test(config->value, list, out_dir ? out_dir : "");
    if (best_sigma)
    {
      *best_sigma = r.points[r.best].sigma;
    }
    if (best_relative)
    {
      *best_relative = r.points[r.best].relative_linf;
    }
  });
}

dgtd_status dgtd_info(const dgtd_config *config, uint64_t seed, char *buffer, size_t capacity,
                      size_t *needed)
{
  return guarded([&] {
    require(config, "dgtd_info: null config");
    copy_out(dgtd::cmd_info(config->value, seed), buffer, capacity, needed);
  });
}

dgtd_status dgtd_simulation_create(const dgtd_config *config, dgtd_simulation **out)
{
  return guarded([&] {
    require(config && out, "dgtd_simulation_create: null argument");
    *out = new dgtd_simulation(config->value);
  });
}

dgtd_status dgtd_simulation_step(dgtd_simulation *sim, long steps)
{
  return guarded([&] {
    require(sim && steps >= 0, "dgtd_simulation_step: invalid argument");
    for (long k = 0; k < steps; ++k)
    {
      sim->sim.stepper().step(sim->state);
    }
    sim->sim.stepper().check(sim->state);
  });
}

dgtd_status dgtd_simulation_energy(const dgtd_simulation *sim, double *energy)
{
  return guarded([&] {
    require(sim && energy, "dgtd_simulation_energy: null argument");
    *energy = sim->sim.stepper().energy(sim->state);
  });
}

dgtd_status dgtd_simulation_time(const dgtd_simulation *sim, double *time, long *step)
{
  return guarded([&] {
    require(sim, "dgtd_simulation_time: null simulation");
    if (time)
    {
      *time = sim->state.time;
    }
    if (step)
    {
      *step = sim->state.step;
    }
  });
}

dgtd_status dgtd_simulation_tau(const dgtd_simulation *sim, double *tau)
{
  return guarded([&] {
    require(sim && tau, "dgtd_simulation_tau: null argument");
    *tau = sim->sim.tau();
  });
}

dgtd_status dgtd_simulation_sample(const dgtd_simulation *sim, const double x[3], double e[3],
                                   double h[3])
{
  return guarded([&] {
    require(sim && x && e && h, "dgtd_simulation_sample: null argument");
    dgtd::Probe p;
    p.name = "sample";
    p.a = {x[0], x[1], x[2]};
    dgtd::resolve_probe(sim->sim.mesh(), sim->sim.config().degree, p);
    const auto s = dgtd::sample_fields(sim->sim.mesh(), sim->sim.reference(), sim->state, p);
    for (int k = 0; k < 3; ++k)
    {
      e[k] = s.e[0][k];
      h[k] = s.h[0][k];
    }
  });
}

void dgtd_simulation_free(dgtd_simulation *sim)
{
  delete sim;
}

}  // extern "C"
