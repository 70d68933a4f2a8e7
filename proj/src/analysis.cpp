#include "cavent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

namespace cavent {

std::string to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::ClosedN2: return "closed_n2";
    case ScenarioName::ClosedN1: return "closed_n1";
    case ScenarioName::ClosedAsymStart: return "closed_asym_start";
    case ScenarioName::OpenPiPulse: return "open_pi_pulse";
    case ScenarioName::NonlinearLeak: return "nonlinear_leak";
  }
  return "?";
}

std::optional<ScenarioName> parse_scenario(std::string_view text) {
  for (ScenarioName name : {ScenarioName::ClosedN2, ScenarioName::ClosedN1,
                            ScenarioName::ClosedAsymStart, ScenarioName::OpenPiPulse,
                            ScenarioName::NonlinearLeak}) {
    if (to_string(name) == text) return name;
  }
  return std::nullopt;
}

ModelParams default_params(ScenarioName name) {
  ModelParams params;
  params.gamma = 1.0;
  params.pump = 1.0;
  params.leak = 1.0;
  switch (name) {
    case ScenarioName::ClosedN1:
      params.n_max = 1;
      break;
    case ScenarioName::OpenPiPulse:
      params.kind = AtomKind::open_atoms(1.0, 1.0);
      params.n_max = 2;
      break;
    case ScenarioName::NonlinearLeak:
      params.leak_multiplier[2] = 100.0;
      params.n_max = 2;
      break;
    default:
      params.n_max = 2;
      break;
  }
  return params;
}

Scenario make_scenario(ScenarioName name, ModelParams params) {
  params.validate();
  const bool wants_open = name == ScenarioName::OpenPiPulse;
  if (params.kind.open != wants_open)
    throw std::invalid_argument(wants_open ? "open_pi_pulse needs open atoms"
                                           : "closed scenarios need closed atoms");
  if (name == ScenarioName::ClosedN1) {
    if (params.n_max != 1) throw std::invalid_argument("closed_n1 is the n_max=1 truncation");
  } else if (!wants_open && params.n_max != 2) {
    throw std::invalid_argument("closed n=2 scenarios require n_max=2");
  } else if (wants_open && (params.n_max < 1 || params.n_max > 6)) {
    throw std::invalid_argument("open scenario supports n_max in [1,6]");
  }
  if (name == ScenarioName::NonlinearLeak && !params.leak_multiplier.count(2))
    params.leak_multiplier[2] = 100.0;
  return Scenario{name, std::move(params)};
}

PopulationVector scenario_initial(const Scenario& scenario, const RateMatrix& m) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m.size());
  switch (scenario.name) {
    case ScenarioName::ClosedAsymStart:
    case ScenarioName::OpenPiPulse:
      // |12;0> as an incoherent dressed-state mixture.
      p(m.index_of("chi_plus")) = 0.25;
      p(m.index_of("chi_minus")) = 0.25;
      p(m.index_of("chi_o")) = 0.5;
      break;
    default:
      p(m.index_of("g")) = 1.0;
      break;
  }
  return PopulationVector(std::move(p));
}

PopulationSplit closed_split(const RateMatrix& m, const PopulationVector& p) {
  PopulationSplit split;
  double dark = 0.0;
  double sink = 0.0;
  double unattributed = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    const std::string& label = m.labels()[i];
    const double v = p[i];
    if (label == "g") split.p_g += v;
    else if (label == "chi_plus" || label == "chi_minus") split.p_s1 += v;
    else if (label == "phi_plus_2" || label == "phi_minus_2") split.p_s2 += v;
    else if (label == "phi_oprime_2") split.p_oprime2 += v;
    else if (m.is_dark(i)) dark += v;
    else if (m.is_sink(i)) sink += v;
    else unattributed += v;
  }
  if (unattributed > 1e-8)
    throw std::domain_error("populations outside the n<=2 slot family cannot be split");
  if (dark > 1e-12) split.p_dark = dark;
  if (m.kind().open) split.p_33 = sink;
  split.validate();
  return split;
}

PopulationSplit steady_closed_form(double gamma, double k, double pi) {
  if (gamma <= 0.0 || k < 0.0 || pi < 0.0)
    throw std::invalid_argument("rates must be non-negative with gamma positive");
  const double pg = (3.0 * gamma + 2.0 * k) * (2.0 * gamma + k) * (gamma + k);
  const double ps1 = 2.0 * pi * (gamma + k) * (3.0 * gamma + 2.0 * k);
  const double ps2 = 4.0 * pi * pi * (gamma + k);
  const double po = pi * pi * (3.0 * gamma + 2.0 * k);
  const double norm = pg + ps1 + ps2 + po;
  PopulationSplit split;
  split.p_g = pg / norm;
  split.p_s1 = ps1 / norm;
  split.p_s2 = ps2 / norm;
  split.p_oprime2 = po / norm;
  return split;
}

namespace {

Measures measures_for(const Scenario& scenario, const ScenarioRun& run) {
  Measures out;
  if (scenario.params.kind.open) {
    out.bell_fraction = bell_fraction(run.reduced);
    return out;
  }
  const PopulationSplit& split = run.split.value();
  out.script_c = script_c(split);
  out.concurrence = std::max(*out.script_c, 0.0);
  return out;
}

}  // namespace

ScenarioRun run_scenario(const Scenario& scenario) {
  const DressedLadder ladder = build_ladder(scenario.params.n_max, scenario.params.kind);
  RateMatrix m = scenario.params.kind.open ? build_open_rate_matrix(ladder, scenario.params)
                                           : build_rate_matrix(ladder, scenario.params);
  PopulationVector p0 = scenario_initial(scenario, m);
  PopulationVector steady = steady_state(m, p0);
  DensityMatrix reduced = m.reduced_density(steady);

  ScenarioRun run{std::move(m), std::move(p0), std::move(steady), std::move(reduced),
                  std::nullopt, {}};
  run.split = closed_split(run.matrix, run.steady);
  run.measures = measures_for(scenario, run);
  return run;
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

void parallel_for(int count, const std::function<void(int)>& body) {
  const unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                              static_cast<unsigned>(count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = static_cast<int>(w); i < count; i += static_cast<int>(workers)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SweepResult sweep(const Scenario& scenario, double pi_min, double pi_max,
                  double k_min, double k_max, int resolution) {
  if (scenario.params.kind.open)
    throw std::domain_error("sweep supports the closed-atom scenarios");
  if (pi_min <= 0.0 || k_min <= 0.0 || pi_max < pi_min || k_max < k_min)
    throw std::invalid_argument("sweep ranges must be positive and ordered");
  if (resolution < 2) throw std::invalid_argument("sweep resolution must be at least 2");

  SweepResult result;
  result.pump_values = linspace(pi_min, pi_max, resolution);
  result.leak_values = linspace(k_min, k_max, resolution);
  result.points.resize(static_cast<size_t>(resolution) * resolution);

  const double gamma = scenario.params.gamma;
  const DressedLadder ladder = build_ladder(scenario.params.n_max, scenario.params.kind);

  parallel_for(resolution * resolution, [&](int index) {
    const int ik = index / resolution;
    const int ipi = index % resolution;
    ModelParams params = scenario.params;
    params.pump = result.pump_values[static_cast<size_t>(ipi)] * gamma;
    params.leak = result.leak_values[static_cast<size_t>(ik)] * gamma;

    const RateMatrix m = build_rate_matrix(ladder, params);
    const Scenario point{scenario.name, params};
    const PopulationVector steady = steady_state(m, scenario_initial(point, m));
    const PopulationSplit split = closed_split(m, steady);

    SweepPoint& p = result.points[static_cast<size_t>(index)];
    p.pump = result.pump_values[static_cast<size_t>(ipi)];
    p.leak = result.leak_values[static_cast<size_t>(ik)];
    p.p_g = split.p_g;
    p.p_s1 = split.p_s1;
    p.p_s2 = split.p_s2;
    p.p_oprime2 = split.p_oprime2;
    p.script_c = script_c(split);
    p.concurrence = std::max(p.script_c, 0.0);
  });
  return result;
}

namespace {

struct NelderMead {
  std::function<double(double, double)> objective;  // maximized
  double lo = 0.0;
  double hi = 0.0;
  int evals = 0;
  int max_evals = 0;
  double best_f = -std::numeric_limits<double>::infinity();
  std::array<double, 2> best_x{};

  double eval(std::array<double, 2> x) {
    x[0] = std::clamp(x[0], lo, hi);
    x[1] = std::clamp(x[1], lo, hi);
    ++evals;
    const double f = objective(std::exp(x[0]), std::exp(x[1]));
    if (f > best_f) {
      best_f = f;
      best_x = x;
    }
    return -f;  // minimize internally
  }

  // Standard reflect/expand/contract/shrink loop on a 2-simplex.
  bool run(std::array<double, 2> start, int iter_cap) {
    std::array<std::array<double, 2>, 3> x{start, start, start};
    x[1][0] += 0.5;
    x[2][1] += 0.5;
    std::array<double, 3> f{};
    for (int i = 0; i < 3; ++i) f[static_cast<size_t>(i)] = eval(x[static_cast<size_t>(i)]);

    for (int iter = 0; iter < iter_cap; ++iter) {
      if (evals >= max_evals) return false;
      std::array<int, 3> order{0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return f[static_cast<size_t>(a)] < f[static_cast<size_t>(b)];
      });
      const auto& xb = x[static_cast<size_t>(order[0])];
      auto& xw = x[static_cast<size_t>(order[2])];
      double& fw = f[static_cast<size_t>(order[2])];
      const double fb = f[static_cast<size_t>(order[0])];
      const double fm = f[static_cast<size_t>(order[1])];

      const double spread = std::abs(fw - fb);
      const double width = std::max(std::abs(xw[0] - xb[0]), std::abs(xw[1] - xb[1]));
      if (spread < 1e-13 * (1.0 + std::abs(fb)) && width < 1e-9) return true;

      std::array<double, 2> centroid{};
      for (int i : {order[0], order[1]}) {
        centroid[0] += x[static_cast<size_t>(i)][0] / 2.0;
        centroid[1] += x[static_cast<size_t>(i)][1] / 2.0;
      }
      auto blend = [&](double t) {
        return std::array<double, 2>{centroid[0] + t * (centroid[0] - xw[0]),
                                     centroid[1] + t * (centroid[1] - xw[1])};
      };

      const auto xr = blend(1.0);
      const double fr = eval(xr);
      if (fr < fb) {
        const auto xe = blend(2.0);
        const double fe = eval(xe);
        if (fe < fr) { xw = xe; fw = fe; } else { xw = xr; fw = fr; }
      } else if (fr < fm) {
        xw = xr;
        fw = fr;
      } else {
        const auto xc = blend(fr < fw ? 0.5 : -0.5);
        const double fc = eval(xc);
        if (fc < std::min(fr, fw)) {
          xw = xc;
          fw = fc;
        } else {
          for (int i : {order[1], order[2]}) {
            auto& xi = x[static_cast<size_t>(i)];
            xi[0] = xb[0] + 0.5 * (xi[0] - xb[0]);
            xi[1] = xb[1] + 0.5 * (xi[1] - xb[1]);
            f[static_cast<size_t>(i)] = eval(xi);
          }
        }
      }
    }
    return false;
  }
};

}  // namespace

MaximizeResult maximize_ps1(const MaximizeOptions& options) {
  const bool numeric = !options.leak_multiplier.empty();
  const DressedLadder ladder = build_ladder(2, AtomKind::closed());

  auto split_at = [&](double pi, double k) {
    if (!numeric) return steady_closed_form(1.0, k, pi);
    ModelParams params;
    params.gamma = 1.0;
    params.pump = pi;
    params.leak = k;
    params.n_max = 2;
    params.leak_multiplier = options.leak_multiplier;
    const RateMatrix m = build_rate_matrix(ladder, params);
    return closed_split(m, steady_state(m, PopulationVector::delta(m.size(), m.index_of("g"))));
  };

  NelderMead nm;
  nm.objective = [&](double pi, double k) { return split_at(pi, k).p_s1; };
  nm.lo = std::log(options.box_min);
  nm.hi = std::log(options.box_max);
  nm.max_evals = options.max_evals;

  std::mt19937_64 rng(options.seed);
  bool all_converged = true;
  constexpr int kStartsPerAxis = 5;
  for (int i = 0; i < kStartsPerAxis; ++i) {
    for (int j = 0; j < kStartsPerAxis; ++j) {
      const double span = nm.hi - nm.lo;
      std::array<double, 2> start{
          nm.lo + span * (i + 0.5) / kStartsPerAxis,
          nm.lo + span * (j + 0.5) / kStartsPerAxis};
      const double jitter = 0.02 * span;
      start[0] += jitter * (std::uniform_real_distribution<double>(-1, 1)(rng));
      start[1] += jitter * (std::uniform_real_distribution<double>(-1, 1)(rng));
      all_converged &= nm.run(start, 2000);
      if (nm.evals >= nm.max_evals) break;
    }
  }

  MaximizeResult result;
  result.pump = std::exp(nm.best_x[0]);
  result.leak = std::exp(nm.best_x[1]);
  result.split = split_at(result.pump, result.leak);
  result.concurrence = concurrence_closed_form(result.split);
  result.evals = nm.evals;
  result.converged = all_converged && nm.evals < nm.max_evals;
  if (!result.converged) throw BudgetExceeded(result);
  return result;
}

LeakSearchResult nonlinear_leak_search(double factor, int resolution) {
  if (factor < 1.0) throw std::domain_error("leak nonlinearity factor must be >= 1");
  ModelParams params = default_params(ScenarioName::NonlinearLeak);
  params.leak_multiplier[2] = factor;
  const Scenario scenario = make_scenario(ScenarioName::NonlinearLeak, params);
  const SweepResult grid = sweep(scenario, 0.05, 5.0, 0.05, 5.0, resolution);

  LeakSearchResult best;
  best.factor = factor;
  best.max_concurrence = -1.0;
  for (const SweepPoint& p : grid.points) {
    if (p.concurrence > best.max_concurrence) {
      best.max_concurrence = p.concurrence;
      best.pump = p.pump;
      best.leak = p.leak;
    }
  }
  return best;
}

DensityMatrix free_space_reference(double gamma21, double gamma23) {
  if (gamma21 <= 0.0 || gamma23 <= 0.0)
    throw std::invalid_argument("branching rates must be positive");
  const double total = gamma21 + gamma23;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(9, 9);
  rho(DensityMatrix::basis_index(1, 1, 9), DensityMatrix::basis_index(1, 1, 9)) = gamma21 / total;
  rho(DensityMatrix::basis_index(1, 3, 9), DensityMatrix::basis_index(1, 3, 9)) = gamma23 / total;
  return DensityMatrix(std::move(rho));
}

}  // namespace cavent
