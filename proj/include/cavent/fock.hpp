#pragma once

// Product basis |a b; c> for two atoms and one cavity mode, sparse state
// vectors over it, and the few operators the model needs: the collective
// atomic lowering operator, the bosonic ladder operators, the resonant
// interaction Hamiltonian, and the partial trace over the field.

#include <compare>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cavent/density_matrix.hpp"

namespace cavent {

using Complex = std::complex<double>;

// Closed atoms have levels {1,2}. Open atoms add a third, pump-decoupled
// level |3> that the excited level decays into.
struct AtomKind {
  bool open = false;
  double gamma21 = 0.0;  // open-atom 2->1 decay rate
  double gamma23 = 0.0;  // open-atom 2->3 decay rate

  static AtomKind closed() { return {}; }
  static AtomKind open_atoms(double g21, double g23) {
    if (g21 <= 0.0 || g23 <= 0.0)
      throw std::invalid_argument("open-atom decay rates must be positive");
    return AtomKind{true, g21, g23};
  }
  int max_level() const { return open ? 3 : 2; }
  int density_dim() const { return open ? 9 : 4; }
};

/// Basis label |a1 a2; c>: the two atomic levels and the photon number.
struct FockProduct {
  int atom1 = 1;
  int atom2 = 1;
  int photons = 0;

  FockProduct() = default;
  FockProduct(int a1, int a2, int c) : atom1(a1), atom2(a2), photons(c) {
    if (a1 < 1 || a1 > 3 || a2 < 1 || a2 > 3)
      throw std::invalid_argument("atom level must be 1, 2 or 3");
    if (c < 0) throw std::invalid_argument("photon number must be non-negative");
  }

  /// Excitation number: atoms in level 2 plus photons. Level 3 carries none.
  int excitation() const { return (atom1 == 2) + (atom2 == 2) + photons; }
  bool uses_level3() const { return atom1 == 3 || atom2 == 3; }

  auto operator<=>(const FockProduct&) const = default;
};

/// Sparse complex superposition over FockProduct labels.
class StateVector {
 public:
  using Map = std::map<FockProduct, Complex>;

  StateVector() = default;

  static StateVector basis(int a1, int a2, int photons) {
    StateVector v;
    v.amps_.emplace(FockProduct(a1, a2, photons), Complex(1.0, 0.0));
    return v;
  }

  void add(const FockProduct& label, Complex amp) {
    if (amp == Complex(0.0, 0.0)) return;
    auto [it, inserted] = amps_.try_emplace(label, amp);
    if (!inserted) {
      it->second += amp;
      if (it->second == Complex(0.0, 0.0)) amps_.erase(it);
    }
  }

  const Map& amplitudes() const { return amps_; }
  bool empty() const { return amps_.empty(); }

  Complex amplitude(const FockProduct& label) const {
    auto it = amps_.find(label);
    return it == amps_.end() ? Complex(0.0, 0.0) : it->second;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& [f, a] : amps_) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(squared_norm()); }

  StateVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    return (1.0 / n) * *this;
  }

  /// <this|other>.
  Complex inner(const StateVector& other) const {
    const StateVector& a = amps_.size() <= other.amps_.size() ? *this : other;
    const StateVector& b = amps_.size() <= other.amps_.size() ? other : *this;
    Complex s = 0.0;
    for (const auto& [f, amp] : a.amps_) {
      const Complex other_amp = b.amplitude(f);
      if (&a == this)
        s += std::conj(amp) * other_amp;
      else
        s += std::conj(other_amp) * amp;
    }
    return s;
  }

  bool uses_level3() const {
    for (const auto& [f, a] : amps_)
      if (f.uses_level3()) return true;
    return false;
  }

  StateVector& operator+=(const StateVector& o) {
    for (const auto& [f, a] : o.amps_) add(f, a);
    return *this;
  }
  StateVector& operator-=(const StateVector& o) {
    for (const auto& [f, a] : o.amps_) add(f, -a);
    return *this;
  }
  StateVector& operator*=(Complex s) {
    if (s == Complex(0.0, 0.0)) {
      amps_.clear();
      return *this;
    }
    for (auto& [f, a] : amps_) a *= s;
    return *this;
  }

  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
  friend StateVector operator*(Complex s, StateVector v) { return v *= s; }
  friend StateVector operator*(StateVector v, Complex s) { return v *= s; }

 private:
  Map amps_;
};

/// (sigma^(1) + sigma^(2)) v where sigma maps from_level -> to_level on each
/// atom in turn. Photon number is untouched.
StateVector collective_lower(const StateVector& v, int from_level, int to_level);

StateVector photon_create(const StateVector& v);
StateVector photon_annihilate(const StateVector& v);

/// Resonant interaction Hamiltonian with equal couplings:
/// g (sigma_12^(1) a+ + sigma_12^(2) a+ + H.c.). Preserves the excitation
/// number; atoms in level 3 are spectators.
StateVector apply_hamiltonian(const StateVector& v, double g);

using WeightedStates = std::vector<std::pair<double, StateVector>>;

/// Trace the field out of a population-weighted mixture of pure states.
/// The result lives in the fixed two-qubit (closed) or two-qutrit (open)
/// basis; its trace equals the total weighted norm of the input.
DensityMatrix partial_trace_field(const WeightedStates& states, const AtomKind& kind);
DensityMatrix partial_trace_field(const StateVector& state, const AtomKind& kind);

}  // namespace cavent
