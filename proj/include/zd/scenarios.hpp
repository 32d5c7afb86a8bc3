#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zd/dynamics.hpp"
#include "zd/integrator.hpp"
#include "zd/model.hpp"
#include "zd/steadystate.hpp"

namespace zd {

enum class ScenarioId { fig2a, fig2b, fig2c, fig2d, fig3, fig4a, fig4b, fig5, experimental };
enum class ModelKind { Full, Effective };

std::string_view to_string(ScenarioId id);
std::string_view to_string(ModelKind m);
/// Both throw InvalidArgument listing the accepted names.
ScenarioId parse_scenario_id(std::string_view name);
ModelKind parse_model_kind(std::string_view name);
const std::vector<ScenarioId>& scenario_catalogue();

/// True for the scenarios that describe a time series (fig2a..d and fig3).
bool is_time_series(ScenarioId id);

/// Grids for the (gamma, kappa) steady sweep and the U_rr deviation scan.
struct SweepGrid {
  std::vector<double> gamma_values;
  std::vector<double> kappa_values;
  std::vector<double> deviation_values;  // delta / Delta ratios
  unsigned fock_cutoff = 1;              // cutoff of the sweep itself
  unsigned verify_every = 10;            // 0 disables the verification pass
  unsigned verify_fock_cutoff = 2;

  bool operator==(const SweepGrid&) const = default;
};

struct Scenario {
  ScenarioId id = ScenarioId::fig2a;
  SystemParams params;
  NamedState initial = NamedState::gg;
  double t_max = 0.0;
  double sample_dt = 1.0;
  ModelKind model = ModelKind::Full;
  bool feedback = false;
  SweepGrid grid;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// Default binding of a scenario, every rate in units of g except for the
/// experimental set, which uses rad/us.
Scenario default_scenario(ScenarioId id);

/// n values from lo to hi, evenly spaced in log(x). Requires 0 < lo <= hi.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// Master equation of a scenario: the full model (with the feedback jump when
/// requested) or the cavity-free effective model.
OpenSystem scenario_system(const Scenario& s);

/// Time series from s.initial (cavity vacuum in the full model) sampled every
/// s.sample_dt up to s.t_max.
Trajectory run_time_series(const Scenario& s, const IntegratorConfig& cfg = {}, const StateObserver& observer = {});

/// Steady state of the scenario's master equation. The effective model is
/// solved on the sector reachable from the two-atom ground manifold.
SteadyResult run_steady(const Scenario& s, const SteadyOptions& opts = {});
SteadyResult steady_for(const SystemParams& p, ModelKind model, bool feedback, const SteadyOptions& opts = {});

/// <S| rho_ss |S> on the atoms, for full or effective steady states.
double steady_fidelity(const SteadyResult& r);

struct SweepRow {
  double gamma = 0.0;
  double kappa = 0.0;
  std::optional<double> cooperativity;
  bool ok = false;  // false when the solver failed at this point
  double fidelity = 0.0;
  double residual = 0.0;
  bool unique = false;
  std::string error;  // solver diagnostic when !ok
};

struct DeviationRow {
  double delta_over_delta = 0.0;
  bool ok = false;
  double fidelity = 0.0;
  double residual = 0.0;
  bool unique = false;
  std::string error;
};

/// Outcome of re-solving a subset of grid points at a larger Fock cutoff.
struct VerifySummary {
  std::size_t points = 0;
  std::size_t failures = 0;  // solver failures during verification
  double max_fidelity_diff = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // gamma-major: gamma_values[i], kappa_values[j] at i * nk + j
  VerifySummary verify;
};

struct DeviationResult {
  std::vector<DeviationRow> rows;
  VerifySummary verify;
};

/// Steady fidelity over gamma_values x kappa_values at grid.fock_cutoff, with
/// the drive, Gamma, detunings and feedback taken from p and `feedback`. Every
/// verify_every-th point (0, k, 2k, ...) is re-solved at verify_fock_cutoff.
/// Rows are in grid order whatever the thread count.
SweepResult run_steady_sweep(const SweepGrid& grid, const SystemParams& p, bool feedback, std::size_t threads);

/// Steady fidelity for each ratio r in grid.deviation_values, with
/// u_rr_deviation = r * delta.
DeviationResult run_deviation_sweep(const SweepGrid& grid, const SystemParams& p, bool feedback, std::size_t threads);

/// First sample time with fidelity_S >= threshold, if any.
std::optional<double> time_to_fidelity(const Trajectory& traj, double threshold);

}  // namespace zd
