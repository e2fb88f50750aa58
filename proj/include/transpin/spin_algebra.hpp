#pragma once

// Spin-1 matrices of the (1,0)+(0,1) field representation, the 4D spin tensor,
// the standard/chiral change of basis and helicity eigenvectors.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transpin/types.hpp"

namespace transpin {

using Mat3c = Eigen::Matrix3cd;
using Mat6c = Eigen::Matrix<std::complex<double>, 6, 6>;
using Vec6c = Eigen::Matrix<std::complex<double>, 6, 1>;

struct SpinMatrixSet {
  std::array<Mat3c, 3> tau;
  std::array<Mat6c, 3> Sigma;  // diag(tau_k, tau_k)
  std::array<Mat6c, 3> alpha;  // [[0, tau_k], [tau_k, 0]]
  /// S[mu][nu], mu, nu = 0..3: S_lm = eps_lmn Sigma_n, S_0l = -i alpha_l, S_l0 = i alpha_l.
  std::array<std::array<Mat6c, 4>, 4> S;
  Mat6c U;  // (1/sqrt 2) [[I, I], [I, -I]]
};

/// Levi-Civita symbol on indices 0..2.
int levi_civita(int i, int j, int k);

SpinMatrixSet build_spin_matrices();

/// Shared immutable instance.
const SpinMatrixSet& spin_matrices();

enum class Representation { Standard, Chiral };

class SixSpinor {
 public:
  SixSpinor(const Vec6c& components, Representation rep) : v_(components), rep_(rep) {}

  /// Standard form (E, i F)/sqrt 2, where F = c B (pass B itself in natural units).
  static SixSpinor from_fields(const CVec3& E, const CVec3& F);

  const Vec6c& components() const { return v_; }
  Representation representation() const { return rep_; }

 private:
  Vec6c v_;
  Representation rep_;
};

/// U psi. Throws RepresentationError unless psi is in the standard form.
SixSpinor to_chiral(const SixSpinor& psi);

/// U psi. Throws RepresentationError unless psi is in the chiral form.
SixSpinor to_standard(const SixSpinor& psi);

struct HelicityEigenpair {
  int lambda = 0;
  CVec3 e;
};

struct HelicityEigensystem {
  Vec3 direction;
  std::array<HelicityEigenpair, 3> pairs;  // lambda = +1, 0, -1

  const CVec3& e(int lambda) const;
};

/// tau . n
Mat3c spin_projection(const Vec3& n);

/// Eigenvectors of tau . n. For n3 > -1 this is the rotation of the e3 triad
/// (1, +-i, 0)/sqrt 2 onto n, which coincides with the closed form having
/// denominator n1 - i n2. At the south pole (|n1 - i n2| < 1e-8, n3 < 0) the
/// vectors are the complex conjugates of those for -n.
/// Throws DomainError when | |n| - 1 | > 1e-12.
HelicityEigensystem helicity_eigensystem(const Vec3& n);

struct HelicityCoefficients {
  cplx plus;  // c_{+1}
  cplx zero;  // c_0
  cplx minus; // c_{-1}
};

/// c_lambda = <e_lambda(n), v>, first argument conjugated.
HelicityCoefficients decompose_polarization(const CVec3& v, const Vec3& n);

CVec3 reconstruct(const HelicityCoefficients& c, const HelicityEigensystem& sys);

/// One commutator [S_a, S_b] expanded on the six independent S_{mu nu}, mu < nu.
struct CommutatorEntry {
  std::string a;
  std::string b;
  std::vector<std::pair<std::string, cplx>> terms;  // nonzero coefficients only
  double residual = 0.0;  // Frobenius norm of what the expansion misses
};

/// Labels "S01", "S02", "S03", "S12", "S13", "S23" in basis order.
const std::array<std::string, 6>& spin_tensor_labels();

using SpinTensorBasis = std::array<Mat6c, 6>;

/// S_{mu nu} for mu < nu in label order.
SpinTensorBasis spin_tensor_basis(const SpinMatrixSet& m);

/// X -> U X U^-1 applied to every basis element.
SpinTensorBasis to_chiral_basis(const SpinTensorBasis& basis, const Mat6c& U);

/// All 15 commutators of distinct basis pairs, computed by brute force.
/// Coefficients within 1e-12 of a Gaussian integer are snapped to it.
std::vector<CommutatorEntry> commutator_table(const SpinTensorBasis& basis);

/// Rank of the span of {i S_{mu nu}} together with all their commutators.
/// Equals 6 when the algebra closes.
int closure_rank(const SpinTensorBasis& basis);

}  // namespace transpin
