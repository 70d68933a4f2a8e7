#pragma once

// Dressed-state ladder of the resonant two-atom Tavis-Cummings model.
// Manifold n=1 holds the exact eigenstates {chi_o, chi_+, chi_-}; every
// manifold n>=2 holds the equal-weight ansatz {phi_o, phi_o', phi_+, phi_-}.
// The n>=2 set is not an exact eigenbasis; eigen_residual measures how far
// a state is from being one.

#include <span>
#include <string>
#include <vector>

#include "cavent/fock.hpp"

namespace cavent {

enum class DressedTag { Ground, Dark, DarkPrime, Plus, Minus };

struct DressedLabel {
  int manifold = 0;
  DressedTag tag = DressedTag::Ground;

  std::string name() const;
  bool operator==(const DressedLabel&) const = default;
};

struct DressedState {
  DressedLabel label;
  StateVector vector;

  /// Dark states (chi_o, phi_o^n) decouple from pump, leakage and collective
  /// decay; their populations are frozen.
  bool dark() const { return label.tag == DressedTag::Dark; }
};

class DressedLadder {
 public:
  const DressedState& ground() const { return ground_; }
  /// States of manifold n, n in [1, n_max].
  std::span<const DressedState> manifold(int n) const;
  int n_max() const { return static_cast<int>(manifolds_.size()); }
  const AtomKind& kind() const { return kind_; }

  /// Ground followed by every manifold in order.
  std::vector<const DressedState*> states() const;

 private:
  friend DressedLadder build_ladder(int n_max, const AtomKind& kind);
  DressedState ground_;
  std::vector<std::vector<DressedState>> manifolds_;
  AtomKind kind_;
};

DressedLadder build_ladder(int n_max, const AtomKind& kind);

/// || H s - <s|H|s> s ||, the deviation of s from being an eigenvector of
/// the interaction Hamiltonian with coupling g.
double eigen_residual(const DressedState& s, double g);

}  // namespace cavent
