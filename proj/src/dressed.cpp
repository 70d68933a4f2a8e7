#include "cavent/dressed.hpp"

#include <numbers>
#include <stdexcept>

namespace cavent {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

StateVector antisymmetric_pair(int photons) {
  StateVector v;
  v += kInvSqrt2 * StateVector::basis(1, 2, photons);
  v -= kInvSqrt2 * StateVector::basis(2, 1, photons);
  return v;
}

}  // namespace

std::string DressedLabel::name() const {
  switch (tag) {
    case DressedTag::Ground:
      return "g";
    case DressedTag::Dark:
      return manifold == 1 ? "chi_o" : "phi_o_" + std::to_string(manifold);
    case DressedTag::DarkPrime:
      return "phi_oprime_" + std::to_string(manifold);
    case DressedTag::Plus:
      return manifold == 1 ? "chi_plus" : "phi_plus_" + std::to_string(manifold);
    case DressedTag::Minus:
      return manifold == 1 ? "chi_minus" : "phi_minus_" + std::to_string(manifold);
  }
  return "?";
}

std::span<const DressedState> DressedLadder::manifold(int n) const {
  if (n < 1 || n > n_max())
    throw std::domain_error("manifold index outside [1, n_max]");
  return manifolds_[static_cast<size_t>(n) - 1];
}

std::vector<const DressedState*> DressedLadder::states() const {
  std::vector<const DressedState*> all;
  all.push_back(&ground_);
  for (const auto& m : manifolds_)
    for (const auto& s : m) all.push_back(&s);
  return all;
}

DressedLadder build_ladder(int n_max, const AtomKind& kind) {
  if (n_max < 1) throw std::domain_error("n_max must be at least 1");

  DressedLadder ladder;
  ladder.kind_ = kind;
  ladder.ground_ = DressedState{{0, DressedTag::Ground}, StateVector::basis(1, 1, 0)};

  {
    std::vector<DressedState> m1;
    m1.push_back({{1, DressedTag::Dark}, antisymmetric_pair(0)});
    StateVector sym = 0.5 * (StateVector::basis(1, 2, 0) + StateVector::basis(2, 1, 0));
    StateVector photon = kInvSqrt2 * StateVector::basis(1, 1, 1);
    m1.push_back({{1, DressedTag::Plus}, photon + sym});
    m1.push_back({{1, DressedTag::Minus}, photon - sym});
    ladder.manifolds_.push_back(std::move(m1));
  }

  for (int n = 2; n <= n_max; ++n) {
    std::vector<DressedState> mn;
    mn.push_back({{n, DressedTag::Dark}, antisymmetric_pair(n - 1)});

    StateVector oprime;
    oprime += kInvSqrt2 * StateVector::basis(1, 1, n);
    oprime -= kInvSqrt2 * StateVector::basis(2, 2, n - 2);
    mn.push_back({{n, DressedTag::DarkPrime}, oprime});

    StateVector ends = 0.5 * (StateVector::basis(1, 1, n) + StateVector::basis(2, 2, n - 2));
    StateVector mids = 0.5 * (StateVector::basis(1, 2, n - 1) + StateVector::basis(2, 1, n - 1));
    mn.push_back({{n, DressedTag::Plus}, ends + mids});
    mn.push_back({{n, DressedTag::Minus}, ends - mids});
    ladder.manifolds_.push_back(std::move(mn));
  }
  return ladder;
}

double eigen_residual(const DressedState& s, double g) {
  StateVector hs = apply_hamiltonian(s.vector, g);
  const Complex energy = s.vector.inner(hs);
  StateVector residual = hs - energy * s.vector;
  return residual.norm();
}

}  // namespace cavent
