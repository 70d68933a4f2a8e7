#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cavent/analysis.hpp"

using namespace cavent;

namespace {

Scenario scenario_with(ScenarioName name, double pump, double leak,
                       double gamma = 1.0) {
  ModelParams params = default_params(name);
  params.gamma = gamma;
  params.pump = pump;
  params.leak = leak;
  return make_scenario(name, std::move(params));
}

}  // namespace

TEST_CASE("scenario construction") {
  CHECK(parse_scenario("closed_asym_start").has_value());
  CHECK(!parse_scenario("bogus").has_value());
  CHECK(to_string(ScenarioName::OpenPiPulse) == "open_pi_pulse");

  ModelParams wrong = default_params(ScenarioName::ClosedN2);
  wrong.n_max = 3;
  CHECK_THROWS_AS(make_scenario(ScenarioName::ClosedN2, wrong), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario(ScenarioName::OpenPiPulse, default_params(ScenarioName::ClosedN2)),
                  std::invalid_argument);
  ModelParams negative = default_params(ScenarioName::ClosedN2);
  negative.pump = -1.0;
  CHECK_THROWS_WITH_AS(make_scenario(ScenarioName::ClosedN2, negative),
                       doctest::Contains("non-negative"), std::invalid_argument);
}

TEST_CASE("single-excitation truncation keeps spurious entanglement") {
  const ScenarioRun n1 = run_scenario(scenario_with(ScenarioName::ClosedN1, 1.0, 0.0));
  // closed form of the truncated model: C = pi / (2 (gamma + k/2 + pi))
  CHECK(n1.measures.concurrence.value() == doctest::Approx(0.25).epsilon(1e-12));

  const ScenarioRun n2 = run_scenario(scenario_with(ScenarioName::ClosedN2, 1.0, 0.0));
  CHECK(n2.measures.concurrence.value() == 0.0);
}

TEST_CASE("weak-pump numeric point") {
  const ScenarioRun run = run_scenario(scenario_with(ScenarioName::ClosedN2, 0.04, 1.0));
  const PopulationSplit& split = run.split.value();
  CHECK(split.p_g == doctest::Approx(0.97337).epsilon(2e-5));
  CHECK(split.p_s1 == doctest::Approx(0.02595).epsilon(4e-4));
  CHECK(run.measures.concurrence.value() == 0.0);

  // dropping the two-excitation weights fakes a nonzero concurrence
  PopulationSplit truncated;
  truncated.p_g = split.p_g / (split.p_g + split.p_s1);
  truncated.p_s1 = split.p_s1 / (split.p_g + split.p_s1);
  CHECK(concurrence_closed_form(truncated) == doctest::Approx(0.0129870).epsilon(1e-4));
  CHECK(concurrence(assemble_reduced(truncated)) > 0.01);
}

TEST_CASE("open protocol is parameter independent") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> rate(0.1, 10.0);
  for (int trial = 0; trial < 5; ++trial) {
    ModelParams params = default_params(ScenarioName::OpenPiPulse);
    params.kind = AtomKind::open_atoms(rate(rng), rate(rng));
    params.pump = rate(rng);
    params.leak = rate(rng);
    const ScenarioRun run = run_scenario(make_scenario(ScenarioName::OpenPiPulse, params));
    CHECK(run.measures.bell_fraction.value() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(run.split.value().p_dark.value() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(run.split.value().p_33.value() == doctest::Approx(0.5).epsilon(1e-10));
  }

  SUBCASE("strict collective decay empties the dark family instead") {
    ModelParams params = default_params(ScenarioName::OpenPiPulse);
    params.strict_collective_decay = true;
    const ScenarioRun run = run_scenario(make_scenario(ScenarioName::OpenPiPulse, params));
    CHECK(run.split.value().p_33.value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(run.measures.bell_fraction.value() < 1e-9);
  }
}

TEST_CASE("homogeneity in the rates") {
  const ScenarioRun base = run_scenario(scenario_with(ScenarioName::ClosedN2, 0.7, 2.1));
  const ScenarioRun scaled =
      run_scenario(scenario_with(ScenarioName::ClosedN2, 0.7 * 3.7, 2.1 * 3.7, 3.7));
  CHECK(std::abs(base.split->p_g - scaled.split->p_g) < 1e-12);
  CHECK(std::abs(base.split->p_s1 - scaled.split->p_s1) < 1e-12);
  CHECK(std::abs(*base.measures.script_c - *scaled.measures.script_c) < 1e-12);
}

TEST_CASE("sweeps") {
  SUBCASE("no-go grid for the full model") {
    const SweepResult grid =
        sweep(scenario_with(ScenarioName::ClosedN2, 1.0, 1.0), 0.05, 5.0, 0.05, 5.0, 12);
    CHECK(grid.points.size() == 144);
    for (const SweepPoint& p : grid.points) {
      CHECK(p.script_c < 0.0);
      CHECK(p.concurrence == 0.0);
    }
  }
  SUBCASE("truncated model is entangled on the whole grid") {
    const SweepResult grid =
        sweep(scenario_with(ScenarioName::ClosedN1, 1.0, 1.0), 0.05, 5.0, 0.05, 5.0, 12);
    for (const SweepPoint& p : grid.points) {
      const double expected = p.pump / (2.0 * (1.0 + p.leak / 2.0 + p.pump));
      CHECK(p.concurrence > 0.0);
      CHECK(std::abs(p.concurrence - expected) < 1e-10);
      CHECK(p.p_s2 == 0.0);
      CHECK(p.p_oprime2 == 0.0);
    }
  }
  SUBCASE("asymmetric start decays from one half as the pump grows") {
    const SweepResult grid = sweep(scenario_with(ScenarioName::ClosedAsymStart, 1.0, 1.0),
                                   0.001, 5.0, 0.05, 5.0, 12);
    for (int ik = 0; ik < 12; ++ik) {
      CHECK(grid.at(ik, 0).concurrence > 0.49);
      CHECK(grid.at(ik, 0).concurrence < 0.5);
      for (int ipi = 1; ipi < 12; ++ipi)
        CHECK(grid.at(ik, ipi).concurrence <= grid.at(ik, ipi - 1).concurrence + 1e-12);
    }
  }
  SUBCASE("grid bookkeeping") {
    const SweepResult grid =
        sweep(scenario_with(ScenarioName::ClosedN2, 1.0, 1.0), 0.5, 1.0, 2.0, 3.0, 2);
    CHECK(grid.pump_values == std::vector<double>{0.5, 1.0});
    CHECK(grid.leak_values == std::vector<double>{2.0, 3.0});
    CHECK(grid.points.size() == 4);
    // leak-major ordering
    CHECK(grid.points[1].pump == 1.0);
    CHECK(grid.points[1].leak == 2.0);
    CHECK(grid.points[2].leak == 3.0);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(sweep(scenario_with(ScenarioName::ClosedN2, 1, 1), 0, 5, 1, 5, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep(scenario_with(ScenarioName::ClosedN2, 1, 1), 1, 5, 1, 5, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep(scenario_with(ScenarioName::OpenPiPulse, 1, 1), 1, 5, 1, 5, 4),
                    std::domain_error);
  }
}

TEST_CASE("population maximization") {
  const MaximizeResult result = maximize_ps1();
  CHECK(result.converged);
  CHECK(result.split.p_s1 == doctest::Approx(0.366).epsilon(0.002 / 0.366));
  CHECK(result.split.p_g == doctest::Approx(0.317).epsilon(0.002 / 0.317));
  CHECK(result.split.p_s2 == doctest::Approx(0.211).epsilon(0.002 / 0.211));
  CHECK(result.split.p_oprime2 == doctest::Approx(0.106).epsilon(0.002 / 0.106));
  CHECK(result.concurrence == 0.0);
  // the optimum runs along pi ~ k / sqrt(3) toward large k
  CHECK(result.pump / result.leak == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));

  SUBCASE("deterministic for a fixed seed") {
    MaximizeOptions options;
    options.seed = 7;
    const MaximizeResult a = maximize_ps1(options);
    const MaximizeResult b = maximize_ps1(options);
    CHECK(a.pump == b.pump);
    CHECK(a.leak == b.leak);
    CHECK(a.split.p_s1 == b.split.p_s1);
    CHECK(a.evals == b.evals);
  }
  SUBCASE("tiny budgets raise with the best point so far") {
    MaximizeOptions options;
    options.max_evals = 40;
    CHECK_THROWS_AS(maximize_ps1(options), BudgetExceeded);
    try {
      maximize_ps1(options);
    } catch (const BudgetExceeded& e) {
      CHECK(e.best.split.p_s1 > 0.0);
      CHECK(e.best.evals >= 40);
    }
  }
}

TEST_CASE("nonlinear leakage search") {
  const LeakSearchResult base = nonlinear_leak_search(1.0, 25);
  CHECK(base.max_concurrence == 0.0);

  const LeakSearchResult ten = nonlinear_leak_search(10.0, 25);
  const LeakSearchResult hundred = nonlinear_leak_search(100.0, 25);
  CHECK(ten.max_concurrence > 0.0);
  CHECK(hundred.max_concurrence >= ten.max_concurrence);

  // frozen regression anchors for the default 50x50 grid
  CHECK(nonlinear_leak_search(10.0).max_concurrence ==
        doctest::Approx(0.0370990503200601).epsilon(1e-9));
  CHECK(nonlinear_leak_search(100.0).max_concurrence ==
        doctest::Approx(0.213363641152492).epsilon(1e-9));

  CHECK_THROWS_AS(nonlinear_leak_search(0.5), std::domain_error);
}

TEST_CASE("free-space reference mixture") {
  CHECK_THROWS_AS(free_space_reference(0.0, 1.0), std::invalid_argument);

  const DensityMatrix even = free_space_reference(2.0, 2.0);
  CHECK(even.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(even.matrix()(2, 2).real() == doctest::Approx(0.5));
  CHECK(even.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bell_fraction(even) == 0.0);

  const DensityMatrix skewed = free_space_reference(3.0, 1.0);
  CHECK(skewed.matrix()(0, 0).real() == doctest::Approx(0.75));
  CHECK(skewed.matrix()(2, 2).real() == doctest::Approx(0.25));
}

TEST_CASE("transients cannot be folded into the closed split") {
  const Scenario scenario = scenario_with(ScenarioName::OpenPiPulse, 1.0, 1.0);
  const DressedLadder ladder = build_ladder(2, scenario.params.kind);
  const RateMatrix m = build_open_rate_matrix(ladder, scenario.params);
  const PopulationVector mid = evolve(m, scenario_initial(scenario, m), 0.4);
  CHECK_THROWS_AS(closed_split(m, mid), std::domain_error);
}
