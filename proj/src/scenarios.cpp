#include "zd/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "zd/parallel.hpp"

namespace zd {
namespace {

constexpr std::array<std::pair<ScenarioId, std::string_view>, 9> kScenarioNames{{
    {ScenarioId::fig2a, "fig2a"},
    {ScenarioId::fig2b, "fig2b"},
    {ScenarioId::fig2c, "fig2c"},
    {ScenarioId::fig2d, "fig2d"},
    {ScenarioId::fig3, "fig3"},
    {ScenarioId::fig4a, "fig4a"},
    {ScenarioId::fig4b, "fig4b"},
    {ScenarioId::fig5, "fig5"},
    {ScenarioId::experimental, "experimental"},
}};

void require_rates(const std::vector<double>& values, const char* name) {
  if (values.empty()) throw InvalidArgument(std::string(name) + " must not be empty");
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument(std::string(name) + " entries must be finite and >= 0");
  }
}

SpaceLayout layout_of(const Operator& rho) {
  const std::size_t atoms = level::count * level::count;
  if (rho.dim() == atoms) return SpaceLayout::atoms_only();
  if (rho.dim() % atoms != 0 || rho.dim() < 2 * atoms) throw InvalidArgument("state is not a two-atom state");
  return SpaceLayout::atoms_and_cavity(rho.dim() / atoms - 1);
}

// Fig. 4 style drive: Omega_a = 0.01 g, omega = Omega_a / 2, Omega_b = g,
// Delta = 20 g, Gamma = 0.001 g.
void weak_drive(SystemParams& p) {
  p.omega_a = 0.01 * p.g;
  p.omega_mw = 0.5 * p.omega_a;
  p.omega_b = p.g;
  p.delta = 20.0 * p.g;
  p.gamma_r = 0.001 * p.g;
}

SweepGrid default_grid(double unit) {
  SweepGrid grid;
  grid.gamma_values = log_spaced(0.03 * unit, unit, 21);
  grid.kappa_values = grid.gamma_values;
  for (int k = -30; k <= 30; ++k) grid.deviation_values.push_back(0.01 * k);
  return grid;
}

double point_fidelity(const SteadyResult& r) { return fidelity_singlet(r.rho_ss, layout_of(r.rho_ss)); }

template <class Row>
VerifySummary verify_rows(const std::vector<Row>& rows, const SweepGrid& grid, std::size_t threads,
                          const std::function<SystemParams(std::size_t)>& params_at, bool feedback) {
  VerifySummary summary;
  if (grid.verify_every == 0) return summary;
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < rows.size(); i += grid.verify_every) {
    if (rows[i].ok) picks.push_back(i);
  }
  struct Check {
    bool ok = false;
    double diff = 0.0;
  };
  const auto checks = parallel_map<Check>(picks.size(), threads, [&](std::size_t k) {
    SystemParams q = params_at(picks[k]);
    q.fock_cutoff = grid.verify_fock_cutoff;
    try {
      const double f = point_fidelity(steady_for(q, ModelKind::Full, feedback && q.kappa > 0.0));
      return Check{true, std::abs(f - rows[picks[k]].fidelity)};
    } catch (const SolverError&) {
      return Check{};
    }
  });
  summary.points = picks.size();
  for (const auto& c : checks) {
    if (!c.ok) {
      ++summary.failures;
    } else {
      summary.max_fidelity_diff = std::max(summary.max_fidelity_diff, c.diff);
    }
  }
  return summary;
}

}  // namespace

std::string_view to_string(ScenarioId id) {
  for (const auto& [k, name] : kScenarioNames)
    if (k == id) return name;
  return "unknown";
}

std::string_view to_string(ModelKind m) { return m == ModelKind::Full ? "full" : "effective"; }

ScenarioId parse_scenario_id(std::string_view name) {
  std::string known;
  for (const auto& [k, n] : kScenarioNames) {
    if (n == name) return k;
    known += known.empty() ? "" : ", ";
    known += n;
  }
  throw InvalidArgument("unknown scenario '" + std::string(name) + "' (expected one of " + known + ")");
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "full") return ModelKind::Full;
  if (name == "effective") return ModelKind::Effective;
  throw InvalidArgument("unknown model '" + std::string(name) + "' (expected full or effective)");
}

const std::vector<ScenarioId>& scenario_catalogue() {
  static const std::vector<ScenarioId> all = [] {
    std::vector<ScenarioId> v;
    for (const auto& entry : kScenarioNames) v.push_back(entry.first);
    return v;
  }();
  return all;
}

bool is_time_series(ScenarioId id) {
  switch (id) {
    case ScenarioId::fig2a:
    case ScenarioId::fig2b:
    case ScenarioId::fig2c:
    case ScenarioId::fig2d:
    case ScenarioId::fig3:
      return true;
    default:
      return false;
  }
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi) || n == 0) {
    throw InvalidArgument("log_spaced: need 0 < lo <= hi and n >= 1");
  }
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo * std::exp(step * static_cast<double>(k));
  out.back() = hi;
  return out;
}

void Scenario::validate() const {
  params.validate();
  if (!std::isfinite(t_max) || t_max < 0.0) throw InvalidArgument("t_max must be finite and >= 0");
  if (!std::isfinite(sample_dt) || sample_dt <= 0.0) throw InvalidArgument("sample_dt must be finite and > 0");
  require_rates(grid.gamma_values, "gamma_values");
  require_rates(grid.kappa_values, "kappa_values");
  if (grid.deviation_values.empty()) throw InvalidArgument("deviation_values must not be empty");
  for (double v : grid.deviation_values) {
    if (!std::isfinite(v)) throw InvalidArgument("deviation_values entries must be finite");
  }
  if (model == ModelKind::Effective && feedback) {
    throw InvalidArgument("feedback acts on the cavity jump and needs model = full");
  }
}

Scenario default_scenario(ScenarioId id) {
  Scenario s;
  s.id = id;
  SystemParams& p = s.params;
  p.fock_cutoff = 2;
  s.sample_dt = 10.0;
  switch (id) {
    case ScenarioId::fig2a:
      p.omega_a = 0.1;
      p.omega_mw = 0.05;
      p.omega_b = 0.5;
      p.delta = 10.0;
      p.gamma = 0.1;
      s.t_max = 5000.0;
      break;
    case ScenarioId::fig2b:
    case ScenarioId::fig2c:
    case ScenarioId::fig2d:
    case ScenarioId::fig3:
      p.omega_a = 0.05;
      p.omega_mw = 0.025;
      p.omega_b = 0.5;
      p.delta = 20.0;
      p.gamma = 0.1;
      s.t_max = 8000.0;
      if (id == ScenarioId::fig2c) {
        p.omega_b = 5.0;
        p.delta = 100.0;
      } else if (id == ScenarioId::fig2d) {
        p.omega_b = 10.0;
        p.delta = 200.0;
      } else if (id == ScenarioId::fig3) {
        p.kappa = 0.1;
      }
      break;
    case ScenarioId::fig4a:
    case ScenarioId::fig4b:
      weak_drive(p);
      // Single solves default to the diagonal point of the highlighted C
      // contour: C = 10 without feedback, C = 5.2 with it.
      p.gamma = p.kappa = 1.0 / std::sqrt(id == ScenarioId::fig4a ? 10.0 : 5.2);
      p.eta = 0.5 * std::numbers::pi;
      s.feedback = id == ScenarioId::fig4b;
      s.t_max = 0.0;
      break;
    case ScenarioId::fig5:
      weak_drive(p);
      p.gamma = p.kappa = 0.1;
      p.eta = 0.5 * std::numbers::pi;
      s.t_max = 0.0;
      break;
    case ScenarioId::experimental: {
      const double mhz = 2.0 * std::numbers::pi;  // rad/us per MHz
      p.g = 14.4 * mhz;
      weak_drive(p);
      p.gamma = 3.0 * mhz;
      p.kappa = 0.66 * mhz;
      p.gamma_r = 0.001 * mhz;
      p.eta = 0.5 * std::numbers::pi;
      s.t_max = 0.0;
      s.sample_dt = 0.01;
      break;
    }
  }
  s.grid = default_grid(p.g);
  return s;
}

OpenSystem scenario_system(const Scenario& s) {
  s.validate();
  if (s.model == ModelKind::Effective) return effective_system(s.params);
  return full_system(s.params, s.feedback);
}

Trajectory run_time_series(const Scenario& s, const IntegratorConfig& cfg, const StateObserver& observer) {
  if (!is_time_series(s.id)) {
    throw InvalidArgument("scenario " + std::string(to_string(s.id)) + " has no time series; use steady, sweep or deviation");
  }
  const OpenSystem sys = scenario_system(s);
  const Operator rho0 = named_density(s.initial, sys.layout);
  const std::vector<double> times = sample_grid(s.t_max, s.sample_dt);
  return evolve(sys.hamiltonian, sys.collapse, rho0, sys.layout, times, cfg, observer);
}

SteadyResult steady_for(const SystemParams& p, ModelKind model, bool feedback, const SteadyOptions& opts) {
  if (model == ModelKind::Effective) {
    if (feedback) throw InvalidArgument("feedback acts on the cavity jump and needs model = full");
    const OpenSystem sys = effective_system(p);
    return steady_state_in_subspace(sys.hamiltonian, sys.collapse, ground_manifold(sys.layout), opts);
  }
  return steady_state(full_system(p, feedback), opts);
}

SteadyResult run_steady(const Scenario& s, const SteadyOptions& opts) {
  s.validate();
  return steady_for(s.params, s.model, s.feedback, opts);
}

double steady_fidelity(const SteadyResult& r) { return point_fidelity(r); }

SweepResult run_steady_sweep(const SweepGrid& grid, const SystemParams& p, bool feedback, std::size_t threads) {
  require_rates(grid.gamma_values, "gamma_values");
  require_rates(grid.kappa_values, "kappa_values");
  p.validate();
  const std::size_t nk = grid.kappa_values.size();
  const std::size_t count = grid.gamma_values.size() * nk;
  auto params_at = [&](std::size_t i) {
    SystemParams q = p;
    q.gamma = grid.gamma_values[i / nk];
    q.kappa = grid.kappa_values[i % nk];
    q.fock_cutoff = grid.fock_cutoff;
    return q;
  };

  SweepResult out;
  out.rows = parallel_map<SweepRow>(count, threads, [&](std::size_t i) {
    const SystemParams q = params_at(i);
    SweepRow row;
    row.gamma = q.gamma;
    row.kappa = q.kappa;
    row.cooperativity = derived_params(q).cooperativity;
    try {
      const SteadyResult r = steady_for(q, ModelKind::Full, feedback && q.kappa > 0.0);
      row.ok = true;
      row.fidelity = point_fidelity(r);
      row.residual = r.residual;
      row.unique = r.unique;
    } catch (const SolverError& e) {
      row.error = e.what();
    } catch (const InvalidArgument& e) {
      row.error = e.what();
    }
    return row;
  });
  out.verify = verify_rows(out.rows, grid, threads, params_at, feedback);
  return out;
}

DeviationResult run_deviation_sweep(const SweepGrid& grid, const SystemParams& p, bool feedback, std::size_t threads) {
  if (grid.deviation_values.empty()) throw InvalidArgument("deviation_values must not be empty");
  p.validate();
  auto params_at = [&](std::size_t i) {
    SystemParams q = p;
    q.u_rr_deviation = grid.deviation_values[i] * p.delta;
    q.fock_cutoff = grid.fock_cutoff;
    return q;
  };

  DeviationResult out;
  out.rows = parallel_map<DeviationRow>(grid.deviation_values.size(), threads, [&](std::size_t i) {
    DeviationRow row;
    row.delta_over_delta = grid.deviation_values[i];
    try {
      const SteadyResult r = steady_for(params_at(i), ModelKind::Full, feedback && p.kappa > 0.0);
      row.ok = true;
      row.fidelity = point_fidelity(r);
      row.residual = r.residual;
      row.unique = r.unique;
    } catch (const SolverError& e) {
      row.error = e.what();
    } catch (const InvalidArgument& e) {
      row.error = e.what();
    }
    return row;
  });
  out.verify = verify_rows(out.rows, grid, threads, params_at, feedback);
  return out;
}

std::optional<double> time_to_fidelity(const Trajectory& traj, double threshold) {
  for (const auto& row : traj.rows)
    if (row.fidelity_S >= threshold) return row.t;
  return std::nullopt;
}

}  // namespace zd
