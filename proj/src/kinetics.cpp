#include "cavent/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace cavent {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

StateVector apply_channel(Channel channel, const StateVector& v) {
  switch (channel) {
    case Channel::Decay21:
      return collective_lower(v, 2, 1);
    case Channel::Decay23:
      return collective_lower(v, 2, 3);
    case Channel::Pump:
      return photon_create(v);
    case Channel::Leak:
      return photon_annihilate(v);
  }
  throw std::logic_error("unknown channel");
}

double channel_strength(Channel channel, int from_manifold, const ModelParams& params) {
  switch (channel) {
    case Channel::Decay21:
      return params.gamma21();
    case Channel::Decay23:
      return params.gamma23();
    case Channel::Pump:
      return params.pump;
    case Channel::Leak:
      return params.leak * params.leak_factor(from_manifold);
  }
  throw std::logic_error("unknown channel");
}

}  // namespace

void ModelParams::validate() const {
  if (gamma < 0.0 || pump < 0.0 || leak < 0.0)
    throw std::invalid_argument("rates must be non-negative");
  if (gamma21() <= 0.0)
    throw std::invalid_argument("the 2->1 decay rate must be positive");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  for (const auto& [n, factor] : leak_multiplier) {
    if (n < 1) throw std::invalid_argument("leak multiplier manifold must be >= 1");
    if (factor <= 0.0) throw std::invalid_argument("leak multipliers must be positive");
  }
  if (strict_collective_decay && !kind.open)
    throw std::invalid_argument("strict collective decay applies to open atoms only");
}

PopulationVector::PopulationVector(Eigen::VectorXd p) : p_(std::move(p)) {
  if (p_.size() == 0) throw std::invalid_argument("empty population vector");
  if (p_.minCoeff() < -1e-12)
    throw std::invalid_argument("populations must be non-negative");
  if (std::abs(p_.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("populations must sum to 1");
}

PopulationVector PopulationVector::delta(int size, int index) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(size);
  p(index) = 1.0;
  return PopulationVector(std::move(p));
}

int RateMatrix::index_of(std::string_view label) const {
  const int i = find(label);
  if (i < 0) throw std::invalid_argument("unknown slot label: " + std::string(label));
  return i;
}

int RateMatrix::find(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return -1;
}

DensityMatrix RateMatrix::reduced_density(const PopulationVector& p) const {
  if (p.size() != size())
    throw std::invalid_argument("population vector does not match slot count");
  WeightedStates weighted;
  for (int i = 0; i < size(); ++i) {
    if (p[i] <= 0.0) continue;
    for (const auto& [w, v] : slots_[i].parts) weighted.emplace_back(p[i] * w, v);
  }
  return partial_trace_field(weighted, kind_);
}

double transition_rate(const DressedState& from, const DressedState& to,
                       Channel channel, const ModelParams& params) {
  params.validate();
  if (channel == Channel::Decay23 && !params.kind.open)
    throw std::domain_error("2->3 decay requires open atoms");
  const StateVector moved = apply_channel(channel, from.vector);
  const double element = std::norm(to.vector.inner(moved));
  return channel_strength(channel, from.label.manifold, params) * element;
}

namespace {

StateVector survivor_state(int level, int photons, int spectator_atom) {
  // spectator_atom is the atom parked in |3>
  return spectator_atom == 1 ? StateVector::basis(3, level, photons)
                             : StateVector::basis(level, 3, photons);
}

void check_build_inputs(const DressedLadder& ladder, const ModelParams& params) {
  params.validate();
  if (ladder.kind().open != params.kind.open)
    throw std::invalid_argument("ladder and params disagree on the atom kind");
  if (ladder.n_max() != params.n_max)
    throw std::invalid_argument("ladder and params disagree on n_max");
}

}  // namespace

// Slots carry orthonormal component vectors with mixture weights; the sink
// aggregates every |33;c> label instead of matching explicit components.
RateMatrix RateMatrix::assemble(const DressedLadder& ladder, const ModelParams& params,
                                bool with_one_atom_sector) {
  std::vector<Slot> slots;
  for (const DressedState* s : ladder.states())
    slots.push_back({s->label.name(), s->dark(), false, s->label.manifold, {{1.0, s->vector}}});

  if (with_one_atom_sector) {
    // Surviving atom + cavity as a single-atom Jaynes-Cummings chain,
    // aggregated over which atom sits in |3>.
    slots.push_back({"atom3_g", false, false, 0,
                     {{0.5, survivor_state(1, 0, 1)}, {0.5, survivor_state(1, 0, 2)}}});
    for (int n = 1; n <= ladder.n_max(); ++n) {
      for (int sign : {+1, -1}) {
        Slot xi;
        xi.label = std::string("atom3_xi_") + (sign > 0 ? "plus_" : "minus_") + std::to_string(n);
        xi.manifold = n;
        for (int spectator : {1, 2}) {
          StateVector v = kInvSqrt2 * survivor_state(1, n, spectator);
          v += (sign * kInvSqrt2) * survivor_state(2, n - 1, spectator);
          xi.parts.emplace_back(0.5, v);
        }
        slots.push_back(std::move(xi));
      }
    }
    slots.push_back({"sink_33", false, true, 0, {{1.0, StateVector::basis(3, 3, 0)}}});
  }

  // Probability captured by a target slot when a source component is moved.
  auto inflow = [](const Slot& to, const StateVector& moved) {
    if (to.sink) {
      double s = 0.0;
      for (const auto& [f, a] : moved.amplitudes())
        if (f.atom1 == 3 && f.atom2 == 3) s += std::norm(a);
      return s;
    }
    double s = 0.0;
    for (const auto& [w, v] : to.parts) s += std::norm(v.inner(moved));
    return s;
  };

  std::vector<Channel> channels{Channel::Decay21, Channel::Pump, Channel::Leak};
  if (with_one_atom_sector) channels.push_back(Channel::Decay23);

  const int n = static_cast<int>(slots.size());
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);

  for (int from = 0; from < n; ++from) {
    const Slot& src = slots[static_cast<size_t>(from)];
    if (src.sink) continue;
    for (Channel channel : channels) {
      // Dark slots are frozen; the strict switch re-derives their 2->3 decay
      // from matrix elements instead.
      if (src.dark && !(channel == Channel::Decay23 && params.strict_collective_decay))
        continue;
      if (channel == Channel::Pump && src.manifold >= ladder.n_max())
        continue;  // truncation: no pumping out of the top manifold
      const double strength = channel_strength(channel, src.manifold, params);
      if (strength == 0.0) continue;

      for (const auto& [weight, vec] : src.parts) {
        const StateVector moved = apply_channel(channel, vec);
        if (moved.empty()) continue;
        for (int to = 0; to < n; ++to) {
          if (to == from || slots[static_cast<size_t>(to)].dark) continue;
          const double captured = inflow(slots[static_cast<size_t>(to)], moved);
          if (captured <= 0.0) continue;
          gen(to, from) += strength * weight * captured;
        }
      }
    }
  }

  for (int j = 0; j < n; ++j) {
    double out = 0.0;
    for (int i = 0; i < n; ++i)
      if (i != j) out += gen(i, j);
    gen(j, j) = -out;
  }

  RateMatrix m;
  m.kind_ = ladder.kind();
  m.n_max_ = ladder.n_max();
  m.gen_ = std::move(gen);
  for (auto& slot : slots) m.labels_.push_back(slot.label);
  m.slots_ = std::move(slots);
  return m;
}

RateMatrix build_rate_matrix(const DressedLadder& ladder, const ModelParams& params) {
  check_build_inputs(ladder, params);
  if (params.kind.open)
    throw std::domain_error(
        "closed-atom generator requested for open atoms; use build_open_rate_matrix");
  return RateMatrix::assemble(ladder, params, false);
}

RateMatrix build_open_rate_matrix(const DressedLadder& ladder, const ModelParams& params) {
  check_build_inputs(ladder, params);
  if (!params.kind.open)
    throw std::domain_error("open-atom generator requires open atoms");
  return RateMatrix::assemble(ladder, params, true);
}

PopulationVector evolve(const RateMatrix& m, const PopulationVector& p0, double t) {
  if (t < 0.0) throw std::domain_error("evolution time must be non-negative");
  if (p0.size() != m.size())
    throw std::invalid_argument("population vector does not match slot count");
  if (t == 0.0) return p0;

  Eigen::VectorXd p = (m.generator() * t).exp() * p0.values();
  const double target = p0.sum();
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) < -1e-9) throw std::runtime_error("evolution produced a negative population");
    p(i) = std::max(p(i), 0.0);
  }
  const double total = p.sum();
  if (total > 0.0) p *= target / total;
  return PopulationVector(std::move(p));
}

PopulationVector steady_state(const RateMatrix& m, const PopulationVector& p0) {
  if (p0.size() != m.size())
    throw std::invalid_argument("population vector does not match slot count");
  const Eigen::MatrixXd& gen = m.generator();

  // Frozen slots are the disconnected ones: an all-zero row and column. In
  // the default models these are exactly the dark slots; the strict decay
  // switch reconnects them.
  std::vector<int> free_idx;
  for (int i = 0; i < m.size(); ++i) {
    const bool frozen = gen.row(i).cwiseAbs().maxCoeff() == 0.0 &&
                        gen.col(i).cwiseAbs().maxCoeff() == 0.0;
    if (!frozen) free_idx.push_back(i);
  }
  const int nf = static_cast<int>(free_idx.size());

  Eigen::VectorXd out = p0.values();
  double mass = 0.0;
  for (int i : free_idx) mass += out(i);
  if (nf == 0 || mass <= 0.0) return p0;

  Eigen::MatrixXd restricted(nf, nf);
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) restricted(i, j) = gen(free_idx[i], free_idx[j]);

  if (restricted.cwiseAbs().maxCoeff() == 0.0) return p0;  // all rates zero

  // The generator is singular by construction; a unique steady state needs a
  // one-dimensional null space on the non-dark block.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double tol = sigma(0) * 1e-9 * nf;
  int nullity = 0;
  for (int i = 0; i < nf; ++i)
    if (sigma(i) <= tol) ++nullity;
  if (nullity != 1) {
    std::ostringstream msg;
    msg << "steady state is not unique (null space dimension " << nullity
        << "); disconnected slots:";
    for (int k = nf - nullity; k < nf; ++k)
      for (int i = 0; i < nf; ++i)
        if (std::abs(svd.matrixV()(i, k)) > 1e-3)
          msg << ' ' << m.labels()[free_idx[i]];
    throw std::domain_error(msg.str());
  }

  // Replace one redundant balance row by the normalization and solve in
  // extended precision with iterative refinement; the smallest populations
  // are required to high relative accuracy.
  using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  LongMatrix a = restricted.cast<long double>();
  a.row(0).setOnes();
  LongVector b = LongVector::Zero(nf);
  b(0) = static_cast<long double>(mass);

  Eigen::PartialPivLU<LongMatrix> lu(a);
  LongVector x = lu.solve(b);
  for (int pass = 0; pass < 2; ++pass) {
    LongVector r = b - a * x;
    x += lu.solve(r);
  }

  double total = 0.0;
  for (int i = 0; i < nf; ++i) {
    double v = static_cast<double>(x(i));
    if (v < -1e-9) throw std::runtime_error("steady-state solve produced a negative population");
    v = std::max(v, 0.0);
    out(free_idx[i]) = v;
    total += v;
  }
  if (total > 0.0)
    for (int i : free_idx) out(i) *= mass / total;
  return PopulationVector(std::move(out));
}

Eigen::Matrix4d aggregate_closed_generator(const RateMatrix& m) {
  if (m.kind().open || m.n_max() != 2)
    throw std::domain_error("aggregation is defined for the closed n_max=2 generator");
  const std::vector<std::vector<int>> groups = {
      {m.index_of("g")},
      {m.index_of("chi_plus"), m.index_of("chi_minus")},
      {m.index_of("phi_plus_2"), m.index_of("phi_minus_2")},
      {m.index_of("phi_oprime_2")}};

  Eigen::Matrix4d agg = Eigen::Matrix4d::Zero();
  const Eigen::MatrixXd& gen = m.generator();
  for (int gi = 0; gi < 4; ++gi) {
    for (int gj = 0; gj < 4; ++gj) {
      double first = 0.0;
      bool have_first = false;
      for (int j : groups[gj]) {
        double col = 0.0;
        for (int i : groups[gi]) col += gen(i, j);
        if (!have_first) {
          first = col;
          have_first = true;
        } else if (std::abs(col - first) > 1e-12 * (1.0 + std::abs(first))) {
          throw std::logic_error("aggregated slots are not symmetric");
        }
      }
      agg(gi, gj) = first;
    }
  }
  return agg;
}

}  // namespace cavent
