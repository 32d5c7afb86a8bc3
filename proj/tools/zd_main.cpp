// Command line front end: simulate, steady, sweep, deviation and params.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "zd/config.hpp"
#include "zd/csv.hpp"
#include "zd/parallel.hpp"
#include "zd/scenarios.hpp"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kSolver = 2, kIo = 3 };

struct Flags {
  std::string scenario;
  std::string config;
  std::string initial;
  std::string model;
  std::string feedback;
  std::string eta;
  std::string fock_cutoff;
  std::string t_max;
  std::string sample_dt;
  std::string out;
  std::size_t threads = 0;
  bool gap = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--scenario", f.scenario, "Scenario id (fig2a..fig2d, fig3, fig4a, fig4b, fig5, experimental)");
  cmd->add_option("--config", f.config, "Config file of key = value lines");
  cmd->add_option("--initial", f.initial, "Initial state: gg, T, ee, S, D, B or rr");
  cmd->add_option("--model", f.model, "full or effective");
  cmd->add_option("--feedback", f.feedback, "on or off");
  cmd->add_option("--eta", f.eta, "Feedback angle in radians");
  cmd->add_option("--fock-cutoff", f.fock_cutoff,
                  "Highest photon number (sweep and deviation: cutoff of the sweep itself)");
  cmd->add_option("--tmax", f.t_max, "Final time in units of 1/g");
  cmd->add_option("--sample-dt", f.sample_dt, "Sample spacing in units of 1/g");
  cmd->add_option("--out", f.out, "Output path (default: standard output)");
  cmd->add_option("--threads", f.threads, "Worker threads (default: ZD_THREADS, else all cores)");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw zd::IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

zd::Scenario resolve(const Flags& f, bool sweep_cutoff) {
  const std::string text = f.config.empty() ? std::string() : read_text(f.config);
  std::optional<zd::ScenarioId> id;
  if (!f.scenario.empty()) id = zd::parse_scenario_id(f.scenario);
  zd::Scenario s = zd::parse_config(text, id);
  auto set = [&](const char* key, const std::string& value) {
    if (!value.empty()) zd::apply_setting(s, key, value);
  };
  set("initial", f.initial);
  set("model", f.model);
  set("feedback", f.feedback);
  set("eta", f.eta);
  set(sweep_cutoff ? "sweep_fock_cutoff" : "fock_cutoff", f.fock_cutoff);
  set("t_max", f.t_max);
  set("sample_dt", f.sample_dt);
  s.validate();
  return s;
}

zd::Provenance provenance(const zd::Scenario& s) {
  zd::Provenance prov{{"program", "zd"}};
  for (auto& kv : zd::config_entries(s)) prov.push_back(std::move(kv));
  const zd::DerivedParams d = zd::derived_params(s.params);
  prov.emplace_back("lambda", zd::format_float(d.lambda));
  prov.emplace_back("u_rr", zd::format_float(d.u_rr));
  if (d.zeno_ratio) prov.emplace_back("zeno_ratio", zd::format_float(*d.zeno_ratio));
  if (d.cooperativity) prov.emplace_back("cooperativity", zd::format_float(*d.cooperativity));
  return prov;
}

void add_verify(zd::Provenance& prov, const zd::SweepGrid& grid, const zd::VerifySummary& v) {
  prov.emplace_back("sweep_fock_cutoff_used", std::to_string(grid.fock_cutoff));
  prov.emplace_back("verify_points", std::to_string(v.points));
  prov.emplace_back("verify_failures", std::to_string(v.failures));
  prov.emplace_back("verify_max_fidelity_diff", zd::format_float(v.max_fidelity_diff));
}

void emit(const Flags& f, const std::string& body) {
  if (f.out.empty()) {
    std::cout << body;
    std::cout.flush();
    if (!std::cout) throw zd::IoError("failed writing to standard output");
  } else {
    zd::write_file(f.out, body);
  }
}

std::size_t thread_count(const Flags& f) { return f.threads > 0 ? f.threads : zd::default_thread_count(); }

std::string key_values(const zd::Provenance& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  return out;
}

int run(const std::string& command, const Flags& f) {
  const bool sweep_like = command == "sweep" || command == "deviation";
  const zd::Scenario s = resolve(f, sweep_like);
  std::ostringstream body;

  if (command == "params") {
    zd::Provenance entries = zd::config_entries(s);
    const zd::DerivedParams d = zd::derived_params(s.params);
    entries.emplace_back("lambda", zd::format_float(d.lambda));
    entries.emplace_back("zeno_ratio", d.zeno_ratio ? zd::format_float(*d.zeno_ratio) : "");
    entries.emplace_back("cooperativity", d.cooperativity ? zd::format_float(*d.cooperativity) : "");
    entries.emplace_back("u_rr", zd::format_float(d.u_rr));
    body << key_values(entries);
  } else if (command == "simulate") {
    const zd::Trajectory traj = zd::run_time_series(s);
    zd::Provenance prov = provenance(s);
    prov.emplace_back("integrator_steps", std::to_string(traj.stats.accepted));
    zd::write_time_series(body, prov, traj);
  } else if (command == "steady") {
    zd::SteadyOptions opts;
    opts.compute_gap = f.gap;
    const zd::SteadyResult r = zd::run_steady(s, opts);
    zd::Provenance entries = provenance(s);
    entries.emplace_back("fidelity", zd::format_float(zd::steady_fidelity(r)));
    entries.emplace_back("purity", zd::format_float(zd::purity(r.rho_ss)));
    entries.emplace_back("residual", zd::format_float(r.residual));
    entries.emplace_back("generator_norm", zd::format_float(r.generator_norm));
    entries.emplace_back("unique", r.unique ? "true" : "false");
    entries.emplace_back("sigma_min", zd::format_float(r.sigma_min));
    entries.emplace_back("sigma_second", zd::format_float(r.sigma_second));
    if (r.gap) entries.emplace_back("gap", zd::format_float(*r.gap));
    body << key_values(entries);
  } else if (command == "sweep") {
    const zd::SweepResult res = zd::run_steady_sweep(s.grid, s.params, s.feedback, thread_count(f));
    zd::Provenance prov = provenance(s);
    add_verify(prov, s.grid, res.verify);
    zd::write_sweep(body, prov, res.rows);
  } else if (command == "deviation") {
    const zd::DeviationResult res = zd::run_deviation_sweep(s.grid, s.params, s.feedback, thread_count(f));
    zd::Provenance prov = provenance(s);
    add_verify(prov, s.grid, res.verify);
    zd::write_deviation(body, prov, res.rows);
  }
  emit(f, body.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative two-atom entanglement: time series, steady states and sweeps"};
  app.require_subcommand(1, 1);
  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "Time series CSV for a fig2*/fig3 scenario"},
      {"steady", "Single steady-state solve with diagnostics"},
      {"sweep", "Steady fidelity over the gamma x kappa grid"},
      {"deviation", "Steady fidelity versus the U_rr deviation delta/Delta"},
      {"params", "Print the resolved and derived parameters"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, flags);
    if (std::string(name) == "steady") cmd->add_flag("--gap", flags.gap, "Also compute the spectral gap");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const zd::InvalidArgument& e) {
    std::fprintf(stderr, "zd %s: invalid input: %s\n", command.c_str(), e.what());
    return kInvalid;
  } catch (const zd::SolverError& e) {
    std::fprintf(stderr, "zd %s: solver failure: %s\n", command.c_str(), e.what());
    return kSolver;
  } catch (const zd::IoError& e) {
    std::fprintf(stderr, "zd %s: i/o failure: %s\n", command.c_str(), e.what());
    return kIo;
  }
}
