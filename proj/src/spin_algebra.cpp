#include "transpin/spin_algebra.hpp"

#include <cmath>

#include "transpin/errors.hpp"

namespace transpin {

namespace {

const cplx I{0.0, 1.0};

Mat6c blocks(const Mat3c& tl, const Mat3c& tr, const Mat3c& bl, const Mat3c& br) {
  Mat6c m;
  m << tl, tr, bl, br;
  return m;
}

// Columns u, v of a right-handed frame (u, v, n) obtained by rotating (e1, e2)
// about e3 x n. Valid for n3 > -1; 1 + n3 is formed without cancellation.
void rotated_frame(const Vec3& n, Vec3& u, Vec3& v) {
  const double rho2 = n.x() * n.x() + n.y() * n.y();
  const double q = n.z() >= 0.0 ? 1.0 + n.z() : rho2 / (1.0 - n.z());  // = 1 + n3
  u = {1.0 - n.x() * n.x() / q, -n.x() * n.y() / q, -n.x()};
  v = {-n.x() * n.y() / q, 1.0 - n.y() * n.y() / q, -n.y()};
}

Eigen::Matrix<cplx, 36, 1> flatten(const Mat6c& m) {
  return Eigen::Map<const Eigen::Matrix<cplx, 36, 1>>(m.data());
}

cplx snap(cplx z) {
  const double re = std::round(z.real());
  const double im = std::round(z.imag());
  // + 0.0 turns a snapped -0 into +0
  return {(std::abs(z.real() - re) < 1e-12 ? re : z.real()) + 0.0,
          (std::abs(z.imag() - im) < 1e-12 ? im : z.imag()) + 0.0};
}

}  // namespace

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0)) ? 1 : -1;
}

SpinMatrixSet build_spin_matrices() {
  SpinMatrixSet s;
  const Mat3c Z = Mat3c::Zero();
  for (int k = 0; k < 3; ++k) {
    Mat3c t;
    for (int l = 0; l < 3; ++l)
      for (int m = 0; m < 3; ++m) t(l, m) = -I * static_cast<double>(levi_civita(k, l, m));
    s.tau[k] = t;
    s.Sigma[k] = blocks(t, Z, Z, t);
    s.alpha[k] = blocks(Z, t, t, Z);
  }
  for (auto& row : s.S)
    for (auto& m : row) m.setZero();
  for (int l = 0; l < 3; ++l) {
    s.S[0][l + 1] = -I * s.alpha[l];
    s.S[l + 1][0] = I * s.alpha[l];
    for (int m = 0; m < 3; ++m) {
      for (int n = 0; n < 3; ++n) {
        const int e = levi_civita(l, m, n);
        if (e != 0) s.S[l + 1][m + 1] += static_cast<double>(e) * s.Sigma[n];
      }
    }
  }
  const Mat3c Id = Mat3c::Identity();
  s.U = blocks(Id, Id, Id, -Id) / std::sqrt(2.0);
  return s;
}

const SpinMatrixSet& spin_matrices() {
  static const SpinMatrixSet set = build_spin_matrices();
  return set;
}

SixSpinor SixSpinor::from_fields(const CVec3& E, const CVec3& F) {
  Vec6c v;
  v << E, I * F;
  return SixSpinor(v / std::sqrt(2.0), Representation::Standard);
}

SixSpinor to_chiral(const SixSpinor& psi) {
  if (psi.representation() != Representation::Standard) {
    throw RepresentationError("to_chiral expects a spinor in the standard representation");
  }
  return SixSpinor(spin_matrices().U * psi.components(), Representation::Chiral);
}

SixSpinor to_standard(const SixSpinor& psi) {
  if (psi.representation() != Representation::Chiral) {
    throw RepresentationError("to_standard expects a spinor in the chiral representation");
  }
  return SixSpinor(spin_matrices().U * psi.components(), Representation::Standard);
}

const CVec3& HelicityEigensystem::e(int lambda) const {
  switch (lambda) {
    case 1: return pairs[0].e;
    case 0: return pairs[1].e;
    case -1: return pairs[2].e;
    default: throw DomainError("helicity must be -1, 0 or +1");
  }
}

Mat3c spin_projection(const Vec3& n) {
  const auto& t = spin_matrices().tau;
  return n.x() * t[0] + n.y() * t[1] + n.z() * t[2];
}

HelicityEigensystem helicity_eigensystem(const Vec3& n_in) {
  const double norm = n_in.norm();
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw DomainError("helicity direction must be a unit vector");
  }
  const Vec3 n = n_in / norm;
  const double rho = std::hypot(n.x(), n.y());

  CVec3 plus;
  Vec3 u, v;
  if (n.z() < 0.0 && rho < 1e-8) {
    rotated_frame(-n, u, v);
    plus = (u.cast<cplx>() - I * v.cast<cplx>()) / std::sqrt(2.0);
  } else {
    rotated_frame(n, u, v);
    plus = (u.cast<cplx>() + I * v.cast<cplx>()) / std::sqrt(2.0);
  }

  HelicityEigensystem sys;
  sys.direction = n;
  sys.pairs[0] = {1, plus};
  sys.pairs[1] = {0, n.cast<cplx>()};
  sys.pairs[2] = {-1, plus.conjugate()};
  return sys;
}

HelicityCoefficients decompose_polarization(const CVec3& v, const Vec3& n) {
  const HelicityEigensystem sys = helicity_eigensystem(n);
  return {sys.e(1).dot(v), sys.e(0).dot(v), sys.e(-1).dot(v)};
}

CVec3 reconstruct(const HelicityCoefficients& c, const HelicityEigensystem& sys) {
  return c.plus * sys.e(1) + c.zero * sys.e(0) + c.minus * sys.e(-1);
}

const std::array<std::string, 6>& spin_tensor_labels() {
  static const std::array<std::string, 6> labels{"S01", "S02", "S03", "S12", "S13", "S23"};
  return labels;
}

SpinTensorBasis spin_tensor_basis(const SpinMatrixSet& m) {
  return {m.S[0][1], m.S[0][2], m.S[0][3], m.S[1][2], m.S[1][3], m.S[2][3]};
}

SpinTensorBasis to_chiral_basis(const SpinTensorBasis& basis, const Mat6c& U) {
  const Mat6c Uinv = U.inverse();
  SpinTensorBasis out;
  for (std::size_t k = 0; k < basis.size(); ++k) out[k] = U * basis[k] * Uinv;
  return out;
}

std::vector<CommutatorEntry> commutator_table(const SpinTensorBasis& basis) {
  Eigen::Matrix<cplx, 36, 6> A;
  for (int k = 0; k < 6; ++k) A.col(k) = flatten(basis[k]);
  const Eigen::ColPivHouseholderQR<Eigen::Matrix<cplx, 36, 6>> qr(A);
  const auto& labels = spin_tensor_labels();

  std::vector<CommutatorEntry> table;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      const Mat6c comm = basis[a] * basis[b] - basis[b] * basis[a];
      const Eigen::Matrix<cplx, 36, 1> target = flatten(comm);
      const Eigen::Matrix<cplx, 6, 1> coeff = qr.solve(target);
      CommutatorEntry entry{labels[a], labels[b], {}, (A * coeff - target).norm()};
      for (int k = 0; k < 6; ++k) {
        const cplx c = snap(coeff[k]);
        if (std::abs(c) > 1e-12) entry.terms.emplace_back(labels[k], c);
      }
      table.push_back(std::move(entry));
    }
  }
  return table;
}

int closure_rank(const SpinTensorBasis& basis) {
  Eigen::Matrix<cplx, 36, Eigen::Dynamic> stack(36, 6 + 15);
  int col = 0;
  for (const auto& m : basis) stack.col(col++) = flatten(I * m);
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      const Mat6c x = I * basis[a], y = I * basis[b];
      stack.col(col++) = flatten(x * y - y * x);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::Matrix<cplx, 36, Eigen::Dynamic>> qr(stack);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

}  // namespace transpin
