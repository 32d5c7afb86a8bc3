#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "zd/config.hpp"
#include "zd/csv.hpp"
#include "zd/parallel.hpp"
#include "zd/scenarios.hpp"

using namespace zd;

TEST_CASE("scenario defaults") {
  const Scenario a = parse_config("", ScenarioId::fig2a);
  CHECK(a.params.omega_a == 0.1);
  CHECK(a.params.omega_mw == 0.05);
  CHECK(a.params.omega_b == 0.5);
  CHECK(a.params.delta == 10.0);
  CHECK(a.params.gamma == 0.1);
  CHECK(a.params.kappa == 0.0);
  CHECK(a.params.gamma_r == 0.0);
  CHECK(a.t_max == 5000.0);
  CHECK(a.initial == NamedState::gg);
  CHECK(a.model == ModelKind::Full);

  const Scenario d = default_scenario(ScenarioId::fig2d);
  CHECK(derived_params(d.params).lambda == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.params.omega_a == 0.05);

  const Scenario f3 = default_scenario(ScenarioId::fig3);
  CHECK(f3.params.kappa == 0.1);
  CHECK(f3.params.delta == 20.0);

  const Scenario f4 = default_scenario(ScenarioId::fig4b);
  CHECK(f4.feedback);
  CHECK(f4.params.eta == doctest::Approx(0.5 * std::numbers::pi));
  CHECK(f4.params.gamma_r == doctest::Approx(0.001));
  CHECK(*derived_params(f4.params).cooperativity == doctest::Approx(5.2));
  CHECK(f4.grid.gamma_values.size() == 21);
  CHECK(f4.grid.gamma_values.front() == doctest::Approx(0.03));
  CHECK(f4.grid.gamma_values.back() == 1.0);

  const Scenario ex = default_scenario(ScenarioId::experimental);
  CHECK(ex.params.g == doctest::Approx(2 * std::numbers::pi * 14.4));
  CHECK(ex.params.omega_a / ex.params.g == doctest::Approx(0.01));
  CHECK(ex.params.delta / ex.params.g == doctest::Approx(20.0));

  for (ScenarioId id : scenario_catalogue()) {
    CHECK(parse_scenario_id(to_string(id)) == id);
    CHECK_NOTHROW(default_scenario(id).validate());
  }
}

TEST_CASE("config parsing") {
  const Scenario s = parse_config("scenario = fig2b\n# comment\n\nfock_cutoff = 3  # trailing\ninitial = T\n");
  CHECK(s.id == ScenarioId::fig2b);
  CHECK(s.params.fock_cutoff == 3);
  CHECK(s.initial == NamedState::T);

  CHECK(parse_config("scenario = fig2a", ScenarioId::fig3).id == ScenarioId::fig3);
  CHECK(parse_config("gamma_values = 0.1, 0.2 ,0.3", ScenarioId::fig4a).grid.gamma_values == std::vector<double>{0.1, 0.2, 0.3});

  CHECK_THROWS_WITH_AS(parse_config("omega_a = 0.1"), doctest::Contains("scenario"), InvalidArgument);
  CHECK_THROWS_WITH_AS(parse_config("scenario = fig2a\nthis is not a setting\n"), doctest::Contains("line 2"), InvalidArgument);
  CHECK_THROWS_WITH_AS(parse_config("scenario = fig2a\nbogus = 1\n"), doctest::Contains("bogus"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("scenario = fig2a\nomega_b = -1\n"), InvalidArgument);
  CHECK_THROWS_WITH_AS(parse_config("scenario = fig2a\n\ngamma = abc\n"), doctest::Contains("line 3"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("scenario = fig9"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("scenario = fig2a\nmodel = effective\nfeedback = on\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("scenario = fig2a\nsample_dt = 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("scenario = fig2a\nfock_cutoff = 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("scenario = fig2a\nkappa_values = 0.1, -0.2\n"), InvalidArgument);
}

TEST_CASE("config round trip") {
  for (ScenarioId id : scenario_catalogue()) {
    Scenario s = default_scenario(id);
    CHECK(parse_config(format_config(s)) == s);
    apply_setting(s, "delta", "12.345678901234567");
    apply_setting(s, "feedback", "on");
    apply_setting(s, "deviation_values", "-0.1, 0.3");
    CHECK(parse_config(format_config(s)) == s);
  }
}

TEST_CASE("csv formatting") {
  CHECK(format_float(0.5) == "5.00000000e-01");
  CHECK(format_float(-1234.5) == "-1.23450000e+03");
  CHECK(format_float(std::nan("")) == "nan");

  Trajectory traj;
  TrajectoryRow row;
  row.t = 10;
  row.purity = 1;
  traj.rows.push_back(row);
  std::ostringstream out;
  write_time_series(out, {{"scenario", "fig2a"}}, traj);
  CHECK(out.str() ==
        "# scenario = fig2a\n"
        "t,purity,fidelity_S,p_gg,p_T,p_S,p_ee,p_rr,n_photon\n"
        "1.00000000e+01,1.00000000e+00,0.00000000e+00,0.00000000e+00,0.00000000e+00,0.00000000e+00,"
        "0.00000000e+00,0.00000000e+00,0.00000000e+00\n");

  std::vector<SweepRow> rows(2);
  rows[0].gamma = 0.1;
  rows[0].kappa = 0.0;
  rows[0].ok = true;
  rows[0].fidelity = 0.9;
  rows[0].unique = true;
  rows[1].gamma = 0.2;
  rows[1].kappa = 0.5;
  rows[1].cooperativity = 10.0;
  std::ostringstream sweep;
  write_sweep(sweep, {}, rows);
  std::istringstream in(sweep.str());
  const CsvTable table = read_csv(in);
  CHECK(table.header.size() == 6);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0][table.column("C")].empty());
  CHECK(table.rows[0][table.column("unique")] == "true");
  CHECK(table.rows[1][table.column("C")] == "1.00000000e+01");
  CHECK(table.rows[1][table.column("fidelity")] == "nan");
  CHECK(table.rows[1][table.column("unique")] == "failed");
  CHECK_THROWS_AS(table.column("missing"), InvalidArgument);

  std::istringstream ragged("a,b\n1,2,3\n");
  CHECK_THROWS_AS(read_csv(ragged), InvalidArgument);
}

TEST_CASE("file output") {
  const auto dir = std::filesystem::temp_directory_path() / "zd_test_csv";
  std::filesystem::create_directories(dir);
  write_file(dir / "x.csv", "a\n");
  std::ifstream f(dir / "x.csv");
  std::string line;
  std::getline(f, line);
  CHECK(line == "a");
  CHECK_THROWS_AS(write_file(dir / "no_such_dir" / "x.csv", "a"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("parallel map") {
  const auto squares = parallel_map<int>(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < 100; ++i) CHECK(squares[i] == static_cast<int>(i * i));
  CHECK(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());

  std::atomic<int> calls{0};
  try {
    parallel_for(50, 3, [&](std::size_t i) {
      ++calls;
      if (i == 7 || i == 30) throw std::runtime_error("boom " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "boom 7");
  }
  CHECK(calls == 50);
}

TEST_CASE("thread count from the environment") {
  setenv("ZD_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  setenv("ZD_THREADS", "x", 1);
  CHECK_THROWS_AS(default_thread_count(), InvalidArgument);
  unsetenv("ZD_THREADS");
  CHECK(default_thread_count() >= 1);
}

TEST_CASE("log spacing") {
  const auto v = log_spaced(0.03, 1.0, 21);
  CHECK(v.size() == 21);
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] / v[k - 1] == doctest::Approx(std::pow(1.0 / 0.03, 0.05)));
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 3), InvalidArgument);
}

TEST_CASE("time series scenarios") {
  Scenario s = default_scenario(ScenarioId::fig2a);
  s.t_max = 100.0;
  s.params.fock_cutoff = 1;
  const Trajectory traj = run_time_series(s);
  CHECK(traj.rows.size() == 11);
  for (const auto& r : traj.rows) {
    CHECK(r.purity <= 1.0 + 1e-9);
    CHECK(r.fidelity_S >= -1e-9);
    CHECK(r.fidelity_S <= 1.0 + 1e-9);
  }
  s.model = ModelKind::Effective;
  CHECK(run_time_series(s).rows.back().n_photon == 0.0);
  CHECK_THROWS_AS(run_time_series(default_scenario(ScenarioId::fig4a)), InvalidArgument);

  Trajectory t;
  for (double f : {0.1, 0.5, 0.95, 0.8}) {
    TrajectoryRow r;
    r.t = f * 10;
    r.fidelity_S = f;
    t.rows.push_back(r);
  }
  CHECK(*time_to_fidelity(t, 0.9) == doctest::Approx(9.5));
  CHECK_FALSE(time_to_fidelity(t, 0.99).has_value());
}

TEST_CASE("sweeps are independent of the thread count") {
  const Scenario s = default_scenario(ScenarioId::fig4a);
  SweepGrid grid = s.grid;
  grid.gamma_values = {0.0, 0.2, 0.5};
  grid.kappa_values = {0.0, 0.3};
  grid.verify_every = 0;
  const SweepResult one = run_steady_sweep(grid, s.params, false, 1);
  const SweepResult many = run_steady_sweep(grid, s.params, false, 4);
  REQUIRE(one.rows.size() == 6);
  std::ostringstream a, b;
  write_sweep(a, {}, one.rows);
  write_sweep(b, {}, many.rows);
  CHECK(a.str() == b.str());
  CHECK(one.rows[1].gamma == 0.0);
  CHECK(one.rows[1].kappa == 0.3);
  CHECK_FALSE(one.rows[2].cooperativity.has_value());
  CHECK(one.rows[2].ok);  // gamma = 0.2, kappa = 0: relaxation through gamma and Gamma
  CHECK(*one.rows[5].cooperativity == doctest::Approx(1.0 / (0.5 * 0.3)));
  for (const auto& r : one.rows) {
    if (!r.ok) continue;
    CHECK(r.fidelity >= -1e-9);
    CHECK(r.fidelity <= 1.0 + 1e-9);
  }

  grid.deviation_values = {-0.1, 0.0, 0.1};
  grid.verify_every = 2;
  const DeviationResult dev = run_deviation_sweep(grid, s.params, false, 2);
  CHECK(dev.rows.size() == 3);
  CHECK(dev.verify.points == 2);
  CHECK(dev.verify.max_fidelity_diff < 1e-3);
}
