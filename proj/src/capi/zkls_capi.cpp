// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "zkls/zkls.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "core/error.hpp"
#include "core/bifurcation.hpp"
#include "core/evans.hpp"
#include "core/runner.hpp"
#include "core/simulator.hpp"
#include "core/soliton.hpp"
#include "core/spectral.hpp"

struct zkls_operator {
  zkls::DiscreteOperator op;
};

struct zkls_evans {
  zkls::EvansProblem problem;
};

struct zkls_sim {
  std::unique_ptr<zkls::Simulator> sim;
  zkls::SimState state;
  double c = 1.0;
};

namespace {

thread_local std::string g_last_error;

zkls_status status_of(zkls::ErrorKind kind) {
  switch (kind) {
    case zkls::ErrorKind::InvalidArgument:
      return ZKLS_ERR_INVALID_ARGUMENT;
    case zkls::ErrorKind::Precondition:
      return ZKLS_ERR_PRECONDITION;
    case zkls::ErrorKind::Numerical:
      return ZKLS_ERR_NUMERICAL;
    case zkls::ErrorKind::Io:
      return ZKLS_ERR_IO;
  }
  return ZKLS_ERR_INTERNAL;
}

zkls_status set_error(zkls_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class Fn>
zkls_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const zkls::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(ZKLS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(ZKLS_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(ZKLS_ERR_INTERNAL, "unknown failure");
  }
}

#define ZKLS_REQUIRE_PTR(p) \
  if (!(p)) return set_error(ZKLS_ERR_INVALID_ARGUMENT, #p " is null")

zkls_status copy_out(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buffer) return ZKLS_OK;
  if (capacity < text.size() + 1) {
    return set_error(ZKLS_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return ZKLS_OK;
}

}  // namespace

extern "C" {

const char* zkls_version(void) { return zkls::kVersion; }

const char* zkls_status_name(zkls_status status) {
  switch (status) {
    case ZKLS_OK:
      return "ok";
    case ZKLS_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case ZKLS_ERR_PRECONDITION:
      return "precondition violated";
    case ZKLS_ERR_NUMERICAL:
      return "numerical failure";
    case ZKLS_ERR_IO:
      return "i/o failure";
    case ZKLS_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case ZKLS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* zkls_last_error(void) { return g_last_error.c_str(); }

zkls_status zkls_soliton_eval(double c, const double* x, size_t n, double* q) {
  return guarded([&] {
    if (n > 0) {
      ZKLS_REQUIRE_PTR(x);
      ZKLS_REQUIRE_PTR(q);
    }
    const zkls::SolitonProfile sol(c);
    for (size_t i = 0; i < n; ++i) q[i] = sol.q(x[i]);
    return ZKLS_OK;
  });
}

zkls_status zkls_soliton_moment(double c, double p, double* value) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(value);
    *value = zkls::SolitonProfile(c).moment_integral(p);
    return ZKLS_OK;
  });
}

zkls_status zkls_classify_threshold(double c, double L, zkls_stability* verdict,
                                    int* witness_mode, double* l_critical) {
  return guarded([&] {
    const auto v = zkls::classify_threshold(c, L);
    if (verdict) {
      *verdict = v.classification == zkls::Stability::Stable     ? ZKLS_STABLE
                 : v.classification == zkls::Stability::Critical ? ZKLS_CRITICAL
                                                                 : ZKLS_UNSTABLE;
    }
    if (witness_mode) *witness_mode = v.witness_mode.value_or(0);
    if (l_critical) *l_critical = v.l_critical;
    return ZKLS_OK;
  });
}

zkls_status zkls_operator_create(zkls_operator_kind kind, double c, double a, double half_width,
                                 int n, double weight, zkls_operator** out) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(out);
    *out = nullptr;
    const zkls::Grid1D grid(half_width, n);
    auto h = std::make_unique<zkls_operator>();
    if (kind == ZKLS_OP_LC_PLUS_A) {
      if (weight != 0.0) {
        return set_error(ZKLS_ERR_INVALID_ARGUMENT, "the self-adjoint operator takes no weight");
      }
      h->op = zkls::build_lc(c, a, grid);
    } else if (kind == ZKLS_OP_DX_LC_PLUS_A) {
      h->op = zkls::build_dx_lc(c, a, grid, weight);
    } else {
      return set_error(ZKLS_ERR_INVALID_ARGUMENT, "unknown operator kind");
    }
    *out = h.release();
    return ZKLS_OK;
  });
}

void zkls_operator_destroy(zkls_operator* op) { delete op; }

zkls_status zkls_operator_size(const zkls_operator* op, int* n) {
  ZKLS_REQUIRE_PTR(op);
  ZKLS_REQUIRE_PTR(n);
  *n = static_cast<int>(op->op.matrix.rows());
  return ZKLS_OK;
}

zkls_status zkls_operator_eigenvalues(const zkls_operator* op, int count, double* re,
                                      double* im) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(op);
    ZKLS_REQUIRE_PTR(re);
    const auto pairs = zkls::eigen_extremal(op->op, count, false);
    for (size_t i = 0; i < pairs.size(); ++i) {
      re[i] = pairs[i].value.real();
      if (im) im[i] = pairs[i].value.imag();
    }
    return ZKLS_OK;
  });
}

zkls_status zkls_operator_unstable(const zkls_operator* op, int* count, double* leading_re,
                                   double* leading_im) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(op);
    const auto u = zkls::unstable_spectrum(op->op);
    if (count) *count = u.count;
    if (leading_re) *leading_re = u.leading ? u.leading->real() : 0.0;
    if (leading_im) *leading_im = u.leading ? u.leading->imag() : 0.0;
    return ZKLS_OK;
  });
}

zkls_status zkls_evans_create(double c, double a, zkls_evans** out) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(out);
    *out = nullptr;
    auto h = std::make_unique<zkls_evans>();
    h->problem = zkls::EvansProblem::make(c, a);
    *out = h.release();
    return ZKLS_OK;
  });
}

void zkls_evans_destroy(zkls_evans* ev) { delete ev; }

zkls_status zkls_evans_eval(const zkls_evans* ev, double lambda_re, double lambda_im,
                            double* d_re, double* d_im) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(ev);
    const auto v = zkls::evans_eval(ev->problem, {lambda_re, lambda_im});
    if (d_re) *d_re = v.d.real();
    if (d_im) *d_im = v.d.imag();
    return ZKLS_OK;
  });
}

zkls_status zkls_evans_root(const zkls_evans* ev, double* lambda) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(ev);
    ZKLS_REQUIRE_PTR(lambda);
    *lambda = zkls::evans_root(ev->problem);
    return ZKLS_OK;
  });
}

zkls_status zkls_evans_origin_slope(double c, double* closed_form, double* finite_difference) {
  return guarded([&] {
    const auto s = zkls::dD_da_origin(c);
    if (closed_form) *closed_form = s.closed_form;
    if (finite_difference) *finite_difference = s.finite_difference;
    return ZKLS_OK;
  });
}

zkls_status zkls_sim_create(double c, double L, double half_width, int nx, int ny, double dt,
                            int dealias, zkls_sim** out) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(out);
    *out = nullptr;
    zkls::SimConfig cfg;
    cfg.grid = zkls::Grid2D(zkls::Grid1D(half_width, nx), ny, L);
    cfg.c = c;
    cfg.dt = dt;
    cfg.dealias = dealias != 0;
    cfg.validate();
    auto h = std::make_unique<zkls_sim>();
    h->c = c;
    h->sim = std::make_unique<zkls::Simulator>(cfg);
    h->state = h->sim->initial_state(zkls::line_soliton(c, cfg.grid));
    *out = h.release();
    return ZKLS_OK;
  });
}

void zkls_sim_destroy(zkls_sim* sim) { delete sim; }

zkls_status zkls_sim_set_soliton(zkls_sim* sim, double delta, uint64_t seed) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(sim);
    const auto& grid = sim->sim->config().grid;
    zkls::Field u = zkls::line_soliton(sim->c, grid);
    if (delta != 0.0) u += delta * zkls::random_perturbation(grid, seed);
    sim->state = sim->sim->initial_state(u);
    return ZKLS_OK;
  });
}

zkls_status zkls_sim_set_field(zkls_sim* sim, const double* u, size_t count) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(sim);
    ZKLS_REQUIRE_PTR(u);
    const auto& grid = sim->sim->config().grid;
    const size_t n = static_cast<size_t>(grid.nx()) * grid.n_y;
    if (count != n) return set_error(ZKLS_ERR_INVALID_ARGUMENT, "field size mismatch");
    sim->state = sim->sim->initial_state(Eigen::Map<const zkls::Field>(u, grid.nx(), grid.n_y));
    return ZKLS_OK;
  });
}

zkls_status zkls_sim_step(zkls_sim* sim, int steps) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(sim);
    if (steps < 0) return set_error(ZKLS_ERR_INVALID_ARGUMENT, "steps must be non-negative");
    for (int i = 0; i < steps; ++i) sim->sim->step(sim->state);
    sim->sim->recenter(sim->state);
    return ZKLS_OK;
  });
}

zkls_status zkls_sim_get_field(const zkls_sim* sim, double* u, size_t count) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(sim);
    ZKLS_REQUIRE_PTR(u);
    const auto& grid = sim->sim->config().grid;
    const size_t n = static_cast<size_t>(grid.nx()) * grid.n_y;
    if (count != n) return set_error(ZKLS_ERR_INVALID_ARGUMENT, "field size mismatch");
    Eigen::Map<zkls::Field>(u, grid.nx(), grid.n_y) = sim->sim->field(sim->state);
    return ZKLS_OK;
  });
}

zkls_status zkls_sim_time(const zkls_sim* sim, double* t) {
  ZKLS_REQUIRE_PTR(sim);
  ZKLS_REQUIRE_PTR(t);
  *t = sim->state.t;
  return ZKLS_OK;
}

zkls_status zkls_sim_invariants(const zkls_sim* sim, double* mass, double* energy, double* crest,
                                double* orbit_distance) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(sim);
    const auto row = sim->sim->measure(sim->state);
    if (mass) *mass = row.mass;
    if (energy) *energy = row.energy;
    if (crest) *crest = row.crest;
    if (orbit_distance) *orbit_distance = row.orbit_distance;
    return ZKLS_OK;
  });
}

zkls_status zkls_run(const char* command, const char* config_text, const char* out_dir,
                     char* summary, size_t capacity, size_t* needed) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(command);
    ZKLS_REQUIRE_PTR(out_dir);
    const auto cfg = zkls::Config::parse(config_text ? config_text : "");
    const auto result = zkls::run_command(command, cfg, out_dir);
    return copy_out(result.dump(2), summary, capacity, needed);
  });
}

zkls_status zkls_command_keys(const char* command, char* buffer, size_t capacity,
                              size_t* needed) {
  return guarded([&] {
    ZKLS_REQUIRE_PTR(command);
    const auto keys = zkls::command_keys(command);
    if (keys.empty()) return set_error(ZKLS_ERR_INVALID_ARGUMENT, "unknown subcommand");
    std::string joined;
    for (const auto& k : keys) joined += (joined.empty() ? "" : ",") + k;
    return copy_out(joined, buffer, capacity, needed);
  });
}

}  // extern "C"
