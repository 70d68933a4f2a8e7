#include "cavent/fock.hpp"

#include <cmath>

namespace cavent {

StateVector collective_lower(const StateVector& v, int from_level, int to_level) {
  if (from_level < 1 || from_level > 3 || to_level < 1 || to_level > 3 ||
      from_level == to_level)
    throw std::domain_error("collective_lower: invalid level pair");
  StateVector out;
  for (const auto& [f, a] : v.amplitudes()) {
    if (f.atom1 == from_level)
      out.add(FockProduct(to_level, f.atom2, f.photons), a);
    if (f.atom2 == from_level)
      out.add(FockProduct(f.atom1, to_level, f.photons), a);
  }
  return out;
}

StateVector photon_create(const StateVector& v) {
  StateVector out;
  for (const auto& [f, a] : v.amplitudes())
    out.add(FockProduct(f.atom1, f.atom2, f.photons + 1),
            a * std::sqrt(f.photons + 1.0));
  return out;
}

StateVector photon_annihilate(const StateVector& v) {
  StateVector out;
  for (const auto& [f, a] : v.amplitudes()) {
    if (f.photons == 0) continue;  // vacuum term vanishes
    out.add(FockProduct(f.atom1, f.atom2, f.photons - 1),
            a * std::sqrt(static_cast<double>(f.photons)));
  }
  return out;
}

StateVector apply_hamiltonian(const StateVector& v, double g) {
  StateVector out;
  for (const auto& [f, a] : v.amplitudes()) {
    // sigma_12 a+ : de-excite an atom, create a photon
    if (f.atom1 == 2)
      out.add(FockProduct(1, f.atom2, f.photons + 1), g * a * std::sqrt(f.photons + 1.0));
    if (f.atom2 == 2)
      out.add(FockProduct(f.atom1, 1, f.photons + 1), g * a * std::sqrt(f.photons + 1.0));
    // H.c.: excite an atom, annihilate a photon
    if (f.photons > 0) {
      const double root = std::sqrt(static_cast<double>(f.photons));
      if (f.atom1 == 1)
        out.add(FockProduct(2, f.atom2, f.photons - 1), g * a * root);
      if (f.atom2 == 1)
        out.add(FockProduct(f.atom1, 2, f.photons - 1), g * a * root);
    }
  }
  return out;
}

DensityMatrix partial_trace_field(const WeightedStates& states, const AtomKind& kind) {
  const int dim = kind.density_dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [weight, v] : states) {
    if (weight < 0.0) throw std::invalid_argument("mixture weights must be non-negative");
    if (!kind.open && v.uses_level3())
      throw std::domain_error("state uses level 3 but the atom kind is closed");
    for (const auto& [f1, a1] : v.amplitudes()) {
      const int i = DensityMatrix::basis_index(f1.atom1, f1.atom2, dim);
      for (const auto& [f2, a2] : v.amplitudes()) {
        if (f1.photons != f2.photons) continue;
        const int j = DensityMatrix::basis_index(f2.atom1, f2.atom2, dim);
        rho(i, j) += weight * a1 * std::conj(a2);
      }
    }
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace_field(const StateVector& state, const AtomKind& kind) {
  return partial_trace_field(WeightedStates{{1.0, state}}, kind);
}

}  // namespace cavent
