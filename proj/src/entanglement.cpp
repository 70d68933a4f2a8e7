#include "cavent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cavent {

void PopulationSplit::validate() const {
  const double lo = std::min({p_g, p_s1, p_s2, p_oprime2,
                              p_dark.value_or(0.0), p_33.value_or(0.0)});
  if (lo < -1e-12) throw std::domain_error("split populations must be non-negative");
  if (std::abs(sum() - 1.0) > 1e-10)
    throw std::domain_error("split populations must sum to 1");
}

DensityMatrix assemble_reduced(const PopulationSplit& split) {
  split.validate();
  const int dim = split.p_33.has_value() ? 9 : 4;
  const int i11 = DensityMatrix::basis_index(1, 1, dim);
  const int i12 = DensityMatrix::basis_index(1, 2, dim);
  const int i21 = DensityMatrix::basis_index(2, 1, dim);
  const int i22 = DensityMatrix::basis_index(2, 2, dim);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(i11, i11) += split.p_g;

  // s1 and s2 trace to the symmetric Bell projector plus diagonal weight.
  auto add_psi_plus = [&](double w) {
    rho(i12, i12) += w;
    rho(i21, i21) += w;
    rho(i12, i21) += w;
    rho(i21, i12) += w;
  };
  rho(i11, i11) += split.p_s1 / 2.0;
  add_psi_plus(split.p_s1 / 4.0);

  rho(i11, i11) += split.p_s2 / 4.0;
  add_psi_plus(split.p_s2 / 4.0);
  rho(i22, i22) += split.p_s2 / 4.0;

  rho(i11, i11) += split.p_oprime2 / 2.0;
  rho(i22, i22) += split.p_oprime2 / 2.0;

  if (split.p_dark) {
    const double w = *split.p_dark / 2.0;
    rho(i12, i12) += w;
    rho(i21, i21) += w;
    rho(i12, i21) -= w;
    rho(i21, i12) -= w;
  }
  if (split.p_33) {
    const int i33 = DensityMatrix::basis_index(3, 3, dim);
    rho(i33, i33) += *split.p_33;
  }
  return DensityMatrix(std::move(rho));
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw std::domain_error(
        "concurrence is defined for two qubits (dim 4); use bell_fraction for the qutrit mixture");

  // The spectrum of rho rho~ carries exact degeneracies on this matrix
  // family; extended precision keeps the general eigensolver accurate there.
  using LongComplex = std::complex<long double>;
  using Matrix4lcd = Eigen::Matrix<LongComplex, 4, 4>;

  // (sy x sy) is the anti-diagonal (-1, 1, 1, -1) in the product basis.
  Matrix4lcd flip = Matrix4lcd::Zero();
  flip(0, 3) = -1.0L;
  flip(1, 2) = 1.0L;
  flip(2, 1) = 1.0L;
  flip(3, 0) = -1.0L;

  const Matrix4lcd r = rho.matrix().cast<LongComplex>();
  Matrix4lcd tilde = flip * r.conjugate() * flip;
  Eigen::ComplexEigenSolver<Matrix4lcd> solver(r * tilde, false);

  std::array<double, 4> roots{};
  for (int i = 0; i < 4; ++i) {
    const LongComplex lambda = solver.eigenvalues()(i);
    if (std::abs(lambda.imag()) > 1e-10)
      throw std::runtime_error("spectrum of rho rho~ is not real");
    roots[static_cast<size_t>(i)] =
        std::sqrt(std::max(static_cast<double>(lambda.real()), 0.0));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(roots[0] - roots[1] - roots[2] - roots[3], 0.0);
}

namespace {

double plain_script_c(double pg, double ps1, double ps2, double po) {
  const double q = (ps2 + 2.0 * po) * (2.0 * po + ps2 + 4.0 * pg + 2.0 * ps1);
  return 0.5 * (ps1 + ps2) - 0.5 * std::sqrt(q);
}

}  // namespace

double script_c(const PopulationSplit& split) {
  split.validate();
  if (split.p_33)
    throw std::domain_error("closed-form concurrence needs the closed-atom slot family");
  if (split.p_dark) {
    if (std::abs(*split.p_dark - 0.5) > 1e-9)
      throw std::domain_error("the asymmetric-start closed form holds for dark weight 1/2 only");
    // Conditional populations of the non-dark half.
    const double pg = 2.0 * split.p_g;
    const double ps1 = 2.0 * split.p_s1;
    const double ps2 = 2.0 * split.p_s2;
    const double po = 2.0 * split.p_oprime2;
    const double q = (ps2 + 2.0 * po) * (2.0 * po + ps2 + 4.0 * pg + 2.0 * ps1);
    return 0.5 - 0.25 * (ps1 + ps2) - 0.25 * std::sqrt(q);
  }
  return plain_script_c(split.p_g, split.p_s1, split.p_s2, split.p_oprime2);
}

double concurrence_closed_form(const PopulationSplit& split) {
  return std::max(script_c(split), 0.0);
}

Eigen::Vector4d concurrence_gradient(const PopulationSplit& split) {
  split.validate();
  if (split.p_dark || split.p_33)
    throw std::domain_error("gradient is defined for the plain four-slot form");
  const double pg = split.p_g;
  const double ps1 = split.p_s1;
  const double ps2 = split.p_s2;
  const double po = split.p_oprime2;
  if (pg <= 0.0 || ps1 <= 0.0 || ps2 <= 0.0 || po <= 0.0)
    throw std::domain_error("gradient requires an interior point");

  const double q = 4.0 * ps2 * pg + 2.0 * ps1 * ps2 + ps2 * ps2 + 4.0 * ps2 * po +
                   8.0 * po * pg + 4.0 * po * ps1 + 4.0 * po * po;
  const double a = 1.0 / std::sqrt(q);

  Eigen::Vector4d grad;
  grad(0) = -(a / 4.0) * (8.0 * po + 4.0 * ps2);
  grad(1) = 0.5 - (a / 4.0) * (4.0 * po + 2.0 * ps2);
  grad(2) = 0.5 - (a / 4.0) * (4.0 * pg + 2.0 * ps1 + 2.0 * ps2 + 4.0 * po);
  grad(3) = -(a / 4.0) * (4.0 * ps2 + 8.0 * pg + 4.0 * ps1 + 8.0 * po);
  return grad;
}

double bell_fraction(const DensityMatrix& rho) {
  const int dim = rho.dim();
  const int i12 = DensityMatrix::basis_index(1, 2, dim);
  const int i21 = DensityMatrix::basis_index(2, 1, dim);
  const Eigen::MatrixXcd& r = rho.matrix();
  const double value =
      0.5 * (r(i12, i12) + r(i21, i21) - r(i12, i21) - r(i21, i12)).real();
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace cavent
