#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace cavent {

// Hermitian density matrix of the two atoms after the field is traced out.
// dim 4: two qubits, basis |11>,|12>,|21>,|22|; dim 9: two qutrits, basis
// |11>,|12>,|13>,|21>,...,|33> row-major.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || (m_.rows() != 4 && m_.rows() != 9))
      throw std::invalid_argument("density matrix must be 4x4 or 9x9");
    const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12)
      throw std::invalid_argument("density matrix is not Hermitian");
    m_ = 0.5 * (m_ + m_.adjoint().eval());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

  /// Index of |a1 a2> in the fixed basis ordering for the given dimension.
  static int basis_index(int a1, int a2, int dim) {
    const int levels = dim == 9 ? 3 : 2;
    if (a1 < 1 || a1 > levels || a2 < 1 || a2 > levels)
      throw std::domain_error("atom level outside basis");
    return (a1 - 1) * levels + (a2 - 1);
  }

 private:
  Eigen::MatrixXcd m_;
};

}  // namespace cavent
