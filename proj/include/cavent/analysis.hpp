#pragma once

// Scenario presets and the numeric studies built on them: steady-state runs,
// (Pi, K) sweeps in units of Gamma, the constrained maximization of the
// one-excitation population, the nonlinear-leakage exploration and the
// free-space reference mixture.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavent/entanglement.hpp"
#include "cavent/kinetics.hpp"

namespace cavent {

enum class ScenarioName { ClosedN2, ClosedN1, ClosedAsymStart, OpenPiPulse, NonlinearLeak };

std::string to_string(ScenarioName name);
std::optional<ScenarioName> parse_scenario(std::string_view text);

struct Scenario {
  ScenarioName name = ScenarioName::ClosedN2;
  ModelParams params;
};

/// Preset parameters for a scenario at the given rates; gamma21/gamma23 are
/// used by the open-atom scenario only.
ModelParams default_params(ScenarioName name);

/// Validates kind and truncation against the scenario and fills preset
/// defaults (e.g. the n=2 leak multiplier of the nonlinear scenario).
Scenario make_scenario(ScenarioName name, ModelParams params);

/// Initial populations: the ground slot, or the pi-pulse distribution
/// (1/4, 1/4 in chi_+/-, 1/2 in chi_o) for the asymmetric starts.
PopulationVector scenario_initial(const Scenario& scenario, const RateMatrix& m);

struct Measures {
  std::optional<double> concurrence;
  std::optional<double> script_c;
  std::optional<double> bell_fraction;
};

struct ScenarioRun {
  RateMatrix matrix;
  PopulationVector initial;
  PopulationVector steady;
  DensityMatrix reduced;
  std::optional<PopulationSplit> split;
  Measures measures;
};

ScenarioRun run_scenario(const Scenario& scenario);

/// Aggregate slot populations into the n<=2 split; throws if mass sits in
/// slots outside that family (one-atom sector, higher manifolds).
PopulationSplit closed_split(const RateMatrix& m, const PopulationVector& p);

/// Steady state of the closed n_max=2 model from its closed-form polynomials.
PopulationSplit steady_closed_form(double gamma, double k, double pi);

struct SweepPoint {
  double pump = 0.0;
  double leak = 0.0;
  double p_g = 0.0;
  double p_s1 = 0.0;
  double p_s2 = 0.0;
  double p_oprime2 = 0.0;
  double script_c = 0.0;
  double concurrence = 0.0;
};

struct SweepResult {
  std::vector<double> pump_values;
  std::vector<double> leak_values;
  std::vector<SweepPoint> points;  // leak-major: points[ik * pumps + ipi]

  const SweepPoint& at(int ik, int ipi) const {
    return points[static_cast<size_t>(ik) * pump_values.size() + ipi];
  }
};

/// Dense grid evaluation over (Pi, K) in units of Gamma. Points are evaluated
/// concurrently and gathered in grid order. Closed-atom scenarios only.
SweepResult sweep(const Scenario& scenario, double pi_min, double pi_max,
                  double k_min, double k_max, int resolution);

struct MaximizeOptions {
  unsigned seed = 0;
  int max_evals = 60000;
  double box_min = 1e-3;  // search box for Pi and K, in units of Gamma
  double box_max = 1e4;
  std::map<int, double> leak_multiplier;  // non-trivial map switches to the numeric objective
};

struct MaximizeResult {
  double pump = 0.0;
  double leak = 0.0;
  PopulationSplit split;
  double concurrence = 0.0;
  int evals = 0;
  bool converged = false;
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(MaximizeResult b)
      : std::runtime_error("optimizer budget exceeded"), best(std::move(b)) {}
  MaximizeResult best;
};

/// Maximize the steady-state s1 population over (Pi, K) with a deterministic
/// seeded multi-start Nelder-Mead in log coordinates. The supremum is
/// approached along the large-K ray Pi ~ K/sqrt(3), so the reported maximizer
/// sits at the box edge.
MaximizeResult maximize_ps1(const MaximizeOptions& options = {});

struct LeakSearchResult {
  double factor = 1.0;
  double pump = 0.0;
  double leak = 0.0;
  double max_concurrence = 0.0;
};

/// Sweep the default grid with the n=2 leak multiplier set to factor and
/// report the best concurrence found.
LeakSearchResult nonlinear_leak_search(double factor, int resolution = 50);

/// Branching-ratio mixture an asymmetric pair decays into without a cavity.
DensityMatrix free_space_reference(double gamma21, double gamma23);

}  // namespace cavent
