#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "cavent/kinetics.hpp"

using namespace cavent;

namespace {

// Reference closed-form steady state of the n_max=2 closed model, kept as an
// independent oracle for the numeric solver: (p_g, p_s1, p_s2, p_o'2).
Eigen::Vector4d closed_form_oracle(double g, double k, double pi) {
  Eigen::Vector4d p;
  p(0) = (3 * g + 2 * k) * (2 * g + k) * (g + k);
  p(1) = 2 * pi * (g + k) * (3 * g + 2 * k);
  p(2) = 4 * pi * pi * (g + k);
  p(3) = pi * pi * (3 * g + 2 * k);
  const double norm = 7 * g * pi * pi + 6 * pi * pi * k + 6 * pi * g * g +
                      10 * pi * k * g + 4 * pi * k * k + 6 * g * g * g +
                      13 * k * g * g + 9 * k * k * g + 2 * k * k * k;
  return p / norm;
}

// Hand-coded aggregated generator over (g, s1, s2, o'2). The s1 balance
// carries -(3/2) Pi p_s1; flipping that sign reproduces the non-conserving
// variant, kept here to show the closed form does not solve it.
Eigen::Matrix4d hand_generator(double g, double k, double pi, bool flip_pump_loss) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = -pi;
  m(0, 1) = g + k / 2;
  m(1, 0) = pi;
  m(1, 1) = -(g + k / 2) + (flip_pump_loss ? 1.5 * pi : -1.5 * pi);
  m(1, 2) = 1.5 * g + k;
  m(1, 3) = g + k;
  m(2, 1) = pi;
  m(2, 2) = -(1.5 * g + k);
  m(3, 1) = 0.5 * pi;
  m(3, 3) = -(g + k);
  return m;
}

ModelParams closed_params(double g, double k, double pi, int n_max = 2) {
  ModelParams params;
  params.gamma = g;
  params.leak = k;
  params.pump = pi;
  params.n_max = n_max;
  return params;
}

ModelParams open_params(double g21, double g23, double k, double pi, int n_max = 2) {
  ModelParams params;
  params.kind = AtomKind::open_atoms(g21, g23);
  params.leak = k;
  params.pump = pi;
  params.n_max = n_max;
  return params;
}

PopulationVector ground_start(const RateMatrix& m) {
  return PopulationVector::delta(m.size(), m.index_of("g"));
}

PopulationVector pi_pulse_start(const RateMatrix& m) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(m.size());
  p(m.index_of("chi_plus")) = 0.25;
  p(m.index_of("chi_minus")) = 0.25;
  p(m.index_of("chi_o")) = 0.5;
  return PopulationVector(std::move(p));
}

Eigen::Vector4d split_of(const RateMatrix& m, const PopulationVector& p) {
  return {p[m.index_of("g")],
          p[m.index_of("chi_plus")] + p[m.index_of("chi_minus")],
          p[m.index_of("phi_plus_2")] + p[m.index_of("phi_minus_2")],
          p[m.index_of("phi_oprime_2")]};
}

}  // namespace

TEST_CASE("closed form solves the conserving aggregated system only") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> rate(0.1, 10.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double g = rate(rng), k = rate(rng), pi = rate(rng);
    const Eigen::Vector4d p = closed_form_oracle(g, k, pi);
    CHECK(std::abs(p.sum() - 1.0) < 1e-12);

    const double residual = (hand_generator(g, k, pi, false) * p).cwiseAbs().maxCoeff();
    CHECK(residual < 1e-12);

    const double flipped = (hand_generator(g, k, pi, true) * p).cwiseAbs().maxCoeff();
    CHECK(flipped > 1e-4);  // = 3 pi p_s1, far from zero

    CHECK(hand_generator(g, k, pi, false).colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    CHECK(hand_generator(g, k, pi, true).colwise().sum().cwiseAbs().maxCoeff() > 1e-4);
  }
}

TEST_CASE("transition rates between dressed states") {
  const DressedLadder ladder = build_ladder(2, AtomKind::closed());
  const ModelParams params = closed_params(1.7, 0.9, 0.6);
  auto state = [&](int n, DressedTag tag) -> const DressedState& {
    if (n == 0) return ladder.ground();
    for (const DressedState& s : ladder.manifold(n))
      if (s.label.tag == tag) return s;
    throw std::logic_error("missing state");
  };
  const auto& g = ladder.ground();
  const auto& chi_o = state(1, DressedTag::Dark);
  const auto& chi_p = state(1, DressedTag::Plus);
  const auto& chi_m = state(1, DressedTag::Minus);
  const auto& phi_p = state(2, DressedTag::Plus);
  const auto& phi_m = state(2, DressedTag::Minus);
  const auto& phi_op = state(2, DressedTag::DarkPrime);

  SUBCASE("decay, pump and leakage onto the n=1 triple") {
    CHECK(transition_rate(chi_o, g, Channel::Decay21, params) == doctest::Approx(0.0));
    CHECK(transition_rate(chi_p, g, Channel::Decay21, params) == doctest::Approx(params.gamma));
    CHECK(transition_rate(chi_m, g, Channel::Decay21, params) == doctest::Approx(params.gamma));
    CHECK(transition_rate(g, chi_o, Channel::Pump, params) == doctest::Approx(0.0));
    CHECK(transition_rate(g, chi_p, Channel::Pump, params) == doctest::Approx(params.pump / 2));
    CHECK(transition_rate(g, chi_m, Channel::Pump, params) == doctest::Approx(params.pump / 2));
    CHECK(transition_rate(chi_p, g, Channel::Leak, params) == doctest::Approx(params.leak / 2));
    CHECK(transition_rate(chi_m, g, Channel::Leak, params) == doctest::Approx(params.leak / 2));
  }

  SUBCASE("n=1 to n=2 pump pattern") {
    CHECK(transition_rate(chi_p, phi_p, Channel::Pump, params) == doctest::Approx(params.pump));
    CHECK(transition_rate(chi_p, phi_m, Channel::Pump, params) == doctest::Approx(0.0));
    CHECK(transition_rate(chi_p, phi_op, Channel::Pump, params) ==
          doctest::Approx(params.pump / 2));
    CHECK(transition_rate(chi_p, state(2, DressedTag::Dark), Channel::Pump, params) ==
          doctest::Approx(0.0));
  }

  SUBCASE("n=2 to n=1 decay and leakage pattern") {
    const double bright = 0.75 + 1.0 / std::numbers::sqrt2;
    const double dim = 0.75 - 1.0 / std::numbers::sqrt2;
    CHECK(transition_rate(phi_p, chi_p, Channel::Decay21, params) ==
          doctest::Approx(params.gamma * bright).epsilon(1e-12));
    CHECK(transition_rate(phi_p, chi_m, Channel::Decay21, params) ==
          doctest::Approx(params.gamma * dim).epsilon(1e-12));
    CHECK(transition_rate(phi_op, chi_p, Channel::Decay21, params) ==
          doctest::Approx(params.gamma / 2).epsilon(1e-12));
    CHECK(transition_rate(phi_p, chi_p, Channel::Leak, params) ==
          doctest::Approx(params.leak).epsilon(1e-12));
    CHECK(transition_rate(phi_p, chi_m, Channel::Leak, params) == doctest::Approx(0.0));
    CHECK(transition_rate(phi_op, chi_p, Channel::Leak, params) ==
          doctest::Approx(params.leak / 2).epsilon(1e-12));
    CHECK(transition_rate(phi_p, chi_o, Channel::Decay21, params) == doctest::Approx(0.0));
  }

  SUBCASE("leak strength honors the per-manifold multiplier") {
    ModelParams scaled = params;
    scaled.leak_multiplier[2] = 40.0;
    CHECK(transition_rate(phi_p, chi_p, Channel::Leak, scaled) ==
          doctest::Approx(40.0 * params.leak).epsilon(1e-12));
    CHECK(transition_rate(chi_p, g, Channel::Leak, scaled) ==
          doctest::Approx(params.leak / 2).epsilon(1e-12));
  }

  SUBCASE("2->3 decay needs open atoms") {
    CHECK_THROWS_AS(transition_rate(chi_p, g, Channel::Decay23, params), std::domain_error);
  }
}

TEST_CASE("closed generator matches the hand-coded aggregated system") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rate(0.1, 10.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double g = rate(rng), k = rate(rng), pi = rate(rng);
    const ModelParams params = closed_params(g, k, pi);
    const DressedLadder ladder = build_ladder(2, params.kind);
    const RateMatrix m = build_rate_matrix(ladder, params);

    const Eigen::Matrix4d agg = aggregate_closed_generator(m);
    const Eigen::Matrix4d hand = hand_generator(g, k, pi, false);
    CHECK((agg - hand).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + hand.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("generator structure") {
  const ModelParams params = closed_params(1.0, 2.0, 0.7, 4);
  const DressedLadder ladder = build_ladder(4, params.kind);
  const RateMatrix m = build_rate_matrix(ladder, params);

  SUBCASE("columns sum to zero and off-diagonals are non-negative") {
    CHECK(m.generator().colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < m.size(); ++i)
      for (int j = 0; j < m.size(); ++j)
        if (i != j) CHECK(m.generator()(i, j) >= 0.0);
  }
  SUBCASE("dark slots are disconnected") {
    for (int i = 0; i < m.size(); ++i) {
      if (!m.is_dark(i)) continue;
      CHECK(m.generator().row(i).cwiseAbs().maxCoeff() == 0.0);
      CHECK(m.generator().col(i).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("n_max=1 truncation matches the single-excitation system") {
    const ModelParams p1 = closed_params(1.0, 2.0, 0.7, 1);
    const RateMatrix m1 = build_rate_matrix(build_ladder(1, p1.kind), p1);
    CHECK(m1.generator()(m1.index_of("chi_plus"), m1.index_of("g")) ==
          doctest::Approx(p1.pump / 2));
    // no pumping out of the top manifold
    CHECK(m1.generator()(m1.index_of("chi_plus"), m1.index_of("chi_plus")) ==
          doctest::Approx(-(p1.gamma + p1.leak / 2)));
    CHECK(m1.generator().colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("steady state against the closed form") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rate(0.1, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double g = rate(rng), k = rate(rng), pi = rate(rng);
    const ModelParams params = closed_params(g, k, pi);
    const RateMatrix m = build_rate_matrix(build_ladder(2, params.kind), params);
    const PopulationVector steady = steady_state(m, ground_start(m));

    const Eigen::Vector4d expected = closed_form_oracle(g, k, pi);
    const Eigen::Vector4d got = split_of(m, steady);
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(got(i) - expected(i)) <= 1e-10 * expected(i));

    // stationarity on the non-dark block
    CHECK((m.generator() * steady.values()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("steady state examples") {
  SUBCASE("no pumping leaves everything in the ground slot") {
    const ModelParams params = closed_params(1.3, 0.8, 0.0);
    const RateMatrix m = build_rate_matrix(build_ladder(2, params.kind), params);
    const PopulationVector steady = steady_state(m, ground_start(m));
    CHECK(steady[m.index_of("g")] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("reference populations of the weak-pump numeric example") {
    // The reference digits (0.97337, 0.02595, 0.00042, 0.00026) are the closed
    // form at pump rate 0.04 with gamma = k = 1.
    const ModelParams params = closed_params(1.0, 1.0, 0.04);
    const RateMatrix m = build_rate_matrix(build_ladder(2, params.kind), params);
    const Eigen::Vector4d got = split_of(m, steady_state(m, ground_start(m)));
    CHECK(std::abs(got(0) - 0.97337) < 1e-5);
    CHECK(std::abs(got(1) - 0.02595) < 1e-5);
    CHECK(std::abs(got(2) - 0.00042) < 1e-5);
    CHECK(std::abs(got(3) - 0.00026) < 1e-5);
  }
}

TEST_CASE("evolution") {
  const ModelParams params = closed_params(1.0, 1.0, 0.447);
  const RateMatrix m = build_rate_matrix(build_ladder(2, params.kind), params);
  const PopulationVector p0 = ground_start(m);

  SUBCASE("t = 0 returns the initial state") {
    const PopulationVector p = evolve(m, p0, 0.0);
    CHECK((p.values() - p0.values()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("negative times are rejected") {
    CHECK_THROWS_AS(evolve(m, p0, -1.0), std::domain_error);
  }
  SUBCASE("long-time limit agrees with the null-space solve") {
    const PopulationVector late = evolve(m, p0, 200.0);
    const PopulationVector steady = steady_state(m, p0);
    CHECK((late.values() - steady.values()).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("probability conservation and dark freezing") {
    const PopulationVector mixed = pi_pulse_start(m);
    for (double t : {0.05, 0.3, 1.0, 4.0, 20.0}) {
      const PopulationVector p = evolve(m, mixed, t);
      CHECK(std::abs(p.values().sum() - 1.0) < 1e-10);
      CHECK(std::abs(p[m.index_of("chi_o")] - 0.5) < 1e-12);
      CHECK(p[m.index_of("phi_o_2")] < 1e-12);
    }
  }
}

TEST_CASE("open-atom generator") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> rate(0.1, 10.0);

  SUBCASE("dark slot stays disconnected and the sink absorbs") {
    const ModelParams params = open_params(1.0, 0.5, 2.0, 0.8);
    const RateMatrix m = build_open_rate_matrix(build_ladder(2, params.kind), params);
    const int dark = m.index_of("chi_o");
    CHECK(m.generator().row(dark).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.generator().col(dark).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.generator().col(m.index_of("sink_33")).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.generator().colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("spectra sit in the left half plane") {
    for (int trial = 0; trial < 20; ++trial) {
      const ModelParams params = open_params(rate(rng), rate(rng), rate(rng), rate(rng));
      const RateMatrix m = build_open_rate_matrix(build_ladder(2, params.kind), params);
      Eigen::EigenSolver<Eigen::MatrixXd> es(m.generator(), false);
      CHECK(es.eigenvalues().real().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("pi-pulse start settles into half dark, half sink") {
    for (int trial = 0; trial < 20; ++trial) {
      const ModelParams params = open_params(rate(rng), rate(rng), rate(rng), rate(rng));
      const RateMatrix m = build_open_rate_matrix(build_ladder(2, params.kind), params);
      const PopulationVector steady = steady_state(m, pi_pulse_start(m));
      CHECK(std::abs(steady[m.index_of("chi_o")] - 0.5) < 1e-10);
      CHECK(std::abs(steady[m.index_of("sink_33")] - 0.5) < 1e-10);
    }
  }

  SUBCASE("strict collective decay drains the dark family") {
    ModelParams params = open_params(1.0, 1.0, 1.0, 1.0);
    params.strict_collective_decay = true;
    const RateMatrix m = build_open_rate_matrix(build_ladder(2, params.kind), params);
    const int dark = m.index_of("chi_o");
    CHECK(m.generator()(dark, dark) < 0.0);
    const PopulationVector steady = steady_state(m, pi_pulse_start(m));
    CHECK(steady[m.index_of("sink_33")] == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("no pumping leaves disconnected resting slots") {
    const ModelParams params = open_params(1.0, 1.0, 1.0, 0.0);
    const RateMatrix m = build_open_rate_matrix(build_ladder(2, params.kind), params);
    CHECK_THROWS_AS(steady_state(m, pi_pulse_start(m)), std::domain_error);
  }
}

TEST_CASE("population vector validation") {
  CHECK_THROWS_AS(PopulationVector(Eigen::Vector3d(0.5, 0.6, 0.1)), std::invalid_argument);
  CHECK_THROWS_AS(PopulationVector(Eigen::Vector3d(-0.2, 0.6, 0.6)), std::invalid_argument);
  CHECK(PopulationVector(Eigen::Vector3d(0.2, 0.3, 0.5)).sum() == doctest::Approx(1.0));
}
