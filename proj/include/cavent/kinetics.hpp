#pragma once

// Classical rate equations over dressed-state populations. Three incoherent
// channels drive the closed model: collective spontaneous emission (Gamma),
// single-photon pumping (Pi) and cavity leakage (K). The open model adds
// 2->3 decay, which funnels population through a one-atom-in-|3> sector into
// the absorbing |33> sink.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cavent/dressed.hpp"
#include "cavent/fock.hpp"

namespace cavent {

enum class Channel { Decay21, Decay23, Pump, Leak };

struct ModelParams {
  AtomKind kind = AtomKind::closed();
  double gamma = 1.0;    // closed-atom collective 2->1 rate; open atoms use kind.gamma21
  double pump = 0.0;     // Pi
  double leak = 0.0;     // K
  double coupling = 1.0; // g, diagnostics only
  int n_max = 2;
  std::map<int, double> leak_multiplier;  // manifold -> factor, default 1
  bool strict_collective_decay = false;   // open atoms: derive 2->3 rates for dark states too

  double gamma21() const { return kind.open ? kind.gamma21 : gamma; }
  double gamma23() const { return kind.open ? kind.gamma23 : 0.0; }
  double leak_factor(int manifold) const {
    auto it = leak_multiplier.find(manifold);
    return it == leak_multiplier.end() ? 1.0 : it->second;
  }
  void validate() const;
};

/// Probability vector over the slots of a RateMatrix.
class PopulationVector {
 public:
  explicit PopulationVector(Eigen::VectorXd p);
  static PopulationVector delta(int size, int index);

  const Eigen::VectorXd& values() const { return p_; }
  double operator[](int i) const { return p_(i); }
  int size() const { return static_cast<int>(p_.size()); }
  double sum() const { return p_.sum(); }

 private:
  Eigen::VectorXd p_;
};

/// Labeled generator of the classical master equation, dP/dt = M P.
/// Off-diagonals are non-negative and every column sums to zero; dark slots
/// have an all-zero row and column.
class RateMatrix {
 public:
  int size() const { return static_cast<int>(slots_.size()); }
  const Eigen::MatrixXd& generator() const { return gen_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(std::string_view label) const;      // throws if absent
  int find(std::string_view label) const;          // -1 if absent
  bool is_dark(int i) const { return slots_[i].dark; }
  bool is_sink(int i) const { return slots_[i].sink; }
  int manifold_of(int i) const { return slots_[i].manifold; }
  const AtomKind& kind() const { return kind_; }
  int n_max() const { return n_max_; }

  /// Atoms-only density matrix of a population vector over these slots.
  DensityMatrix reduced_density(const PopulationVector& p) const;

 private:
  friend RateMatrix build_rate_matrix(const DressedLadder&, const ModelParams&);
  friend RateMatrix build_open_rate_matrix(const DressedLadder&, const ModelParams&);

  struct Slot {
    std::string label;
    bool dark = false;
    bool sink = false;
    int manifold = 0;
    WeightedStates parts;  // orthonormal components with mixture weights
  };

  static RateMatrix assemble(const DressedLadder& ladder, const ModelParams& params,
                             bool with_one_atom_sector);

  std::vector<Slot> slots_;
  std::vector<std::string> labels_;
  Eigen::MatrixXd gen_;
  AtomKind kind_;
  int n_max_ = 0;
};

/// Incoherent rate from one dressed state to another through a single
/// channel: channel strength times the squared collective matrix element.
double transition_rate(const DressedState& from, const DressedState& to,
                       Channel channel, const ModelParams& params);

/// Closed-atom generator over {ground} + dressed slots. Pumping out of the
/// top manifold is disabled, reflecting the truncation.
RateMatrix build_rate_matrix(const DressedLadder& ladder, const ModelParams& params);

/// Open-atom generator: the closed slots plus the aggregated one-atom-in-|3>
/// sector (a single-atom Jaynes-Cummings chain truncated at the same n_max)
/// and the absorbing |33> sink.
RateMatrix build_open_rate_matrix(const DressedLadder& ladder, const ModelParams& params);

/// p(t) = exp(M t) p0, entries clamped against roundoff and renormalized.
PopulationVector evolve(const RateMatrix& m, const PopulationVector& p0, double t);

/// t -> infinity limit of evolve: dark slots stay at their initial values and
/// the non-dark block is solved by the null space of the restricted
/// generator, normalized to the non-dark probability mass of p0.
PopulationVector steady_state(const RateMatrix& m, const PopulationVector& p0);

/// Restriction of a closed n_max=2 generator to the aggregated slots
/// {g, s1 = chi_+ + chi_-, s2 = phi_+^2 + phi_-^2, o'2}, in that order.
Eigen::Matrix4d aggregate_closed_generator(const RateMatrix& m);

}  // namespace cavent
