#pragma once

// Entanglement measures for the atomic reduced state: Wootters concurrence
// (generic eigenvalue route and the closed form for this matrix family), the
// analytic gradient of the closed form, and the Bell-state fraction used for
// the open-atom qutrit mixture.

#include <optional>

#include <Eigen/Dense>

#include "cavent/density_matrix.hpp"

namespace cavent {

// Probabilities of the aggregated slots entering the reduced density matrix.
// p_dark is the antisymmetric-family weight (traces to |psi-><psi-|);
// p_33 marks the open-atom sink and switches assembly to the qutrit basis.
// Present fields must sum to 1.
struct PopulationSplit {
  double p_g = 0.0;
  double p_s1 = 0.0;
  double p_s2 = 0.0;
  double p_oprime2 = 0.0;
  std::optional<double> p_dark;
  std::optional<double> p_33;

  double sum() const {
    return p_g + p_s1 + p_s2 + p_oprime2 + p_dark.value_or(0.0) + p_33.value_or(0.0);
  }
  void validate() const;
};

/// Population-weighted sum of the per-slot reduced matrices.
DensityMatrix assemble_reduced(const PopulationSplit& split);

/// Wootters concurrence of a two-qubit state, from the spectrum of
/// rho (sy x sy) rho* (sy x sy).
double concurrence(const DensityMatrix& rho);

/// The closed-form concurrence argument before the max(.,0) clamp.
/// With p_dark = 1/2 present this is the asymmetric-start variant.
double script_c(const PopulationSplit& split);

/// max(script_c, 0); identical to the generic route on this matrix family.
double concurrence_closed_form(const PopulationSplit& split);

/// Analytic partials of script_c with respect to (p_g, p_s1, p_s2, p_oprime2)
/// at an interior point of the plain four-slot form.
Eigen::Vector4d concurrence_gradient(const PopulationSplit& split);

/// <psi-| rho |psi->, with psi- embedded in the {1,2} x {1,2} block.
double bell_fraction(const DensityMatrix& rho);

}  // namespace cavent
