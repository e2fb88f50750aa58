#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "test_support.hpp"
#include "transpin/cli.hpp"
#include "transpin/errors.hpp"
#include "transpin/spin_algebra.hpp"

using namespace transpin;

namespace {

const cplx I{0.0, 1.0};
const double r2 = std::sqrt(2.0);

// |<a, b>| = 1 for unit vectors equal up to a global phase
bool same_up_to_phase(const CVec3& a, const CVec3& b, double tol) {
  return std::abs(std::abs(a.dot(b)) - 1.0) <= tol && std::abs(a.norm() - 1.0) <= tol;
}

Vec3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v / v.norm();
}

}  // namespace

TEST_CASE("tau matrices") {
  const auto& m = spin_matrices();
  CHECK(m.tau[2](0, 1) == -I);
  CHECK(m.tau[2](1, 0) == I);
  CHECK(m.tau[2](2, 2) == cplx(0.0));
  CHECK(m.tau[2](0, 2) == cplx(0.0));
  Mat3c sq = Mat3c::Zero();
  for (int i = 0; i < 3; ++i) {
    CHECK((m.tau[i] - m.tau[i].adjoint()).norm() == 0.0);
    sq += m.tau[i] * m.tau[i];
    for (int j = 0; j < 3; ++j) {
      Mat3c rhs = Mat3c::Zero();
      for (int k = 0; k < 3; ++k) rhs += I * static_cast<double>(levi_civita(i, j, k)) * m.tau[k];
      CHECK((m.tau[i] * m.tau[j] - m.tau[j] * m.tau[i] - rhs).norm() == 0.0);
    }
  }
  CHECK((sq - 2.0 * Mat3c::Identity()).norm() == 0.0);
}

TEST_CASE("six-dimensional matrices") {
  const auto& m = spin_matrices();
  Mat6c sq = Mat6c::Zero();
  for (int i = 0; i < 3; ++i) sq += m.Sigma[i] * m.Sigma[i];
  CHECK((sq - 2.0 * Mat6c::Identity()).norm() == 0.0);
  CHECK((m.U * m.U - Mat6c::Identity()).norm() <= 1e-15);
  CHECK((m.U - m.U.adjoint()).norm() == 0.0);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) CHECK((m.S[mu][nu] + m.S[nu][mu]).norm() == 0.0);
  CHECK((m.S[1][2] - m.Sigma[2]).norm() == 0.0);
  CHECK((m.S[0][1] + I * m.alpha[0]).norm() == 0.0);
}

TEST_CASE("chiral transform") {
  CVec3 E(1.0, 0.0, 0.0);
  const SixSpinor s = SixSpinor::from_fields(E, CVec3::Zero());
  Vec6c expected_s;
  expected_s << 1.0 / r2, 0, 0, 0, 0, 0;
  CHECK((s.components() - expected_s).norm() == 0.0);
  const SixSpinor c = to_chiral(s);
  Vec6c expected_c;
  expected_c << 0.5, 0, 0, 0.5, 0, 0;
  CHECK((c.components() - expected_c).norm() <= 1e-15);
  CHECK(c.representation() == Representation::Chiral);
  CHECK_THROWS_AS(to_chiral(c), RepresentationError);
  CHECK_THROWS_AS(to_standard(s), RepresentationError);

  // (E + iB, E - iB)/2 in natural units
  const CVec3 E2(0.3, -0.2 * I, 1.0), B2(0.1 * I, 0.7, -0.4);
  const SixSpinor c2 = to_chiral(SixSpinor::from_fields(E2, B2));
  CHECK((c2.components().head<3>() - (E2 + I * B2) / 2.0).norm() <= 1e-15);
  CHECK((c2.components().tail<3>() - (E2 - I * B2) / 2.0).norm() <= 1e-15);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    Vec6c v;
    for (auto& x : v) x = {g(rng), g(rng)};
    const SixSpinor back = to_standard(to_chiral(SixSpinor(v, Representation::Standard)));
    CHECK((back.components() - v).cwiseAbs().maxCoeff() <= 1e-15 * v.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("helicity eigenvectors on the axes") {
  const HelicityEigensystem z = helicity_eigensystem({0, 0, 1});
  CHECK(z.e(1) == CVec3(1 / r2, I / r2, 0));
  CHECK(z.e(-1) == CVec3(1 / r2, -I / r2, 0));
  CHECK(z.e(0) == CVec3(0, 0, 1));

  const HelicityEigensystem x = helicity_eigensystem({1, 0, 0});
  CHECK(same_up_to_phase(x.e(1), CVec3(0, I / r2, -1 / r2), 1e-15));
  CHECK(same_up_to_phase(x.e(-1), CVec3(0, -I / r2, -1 / r2), 1e-15));
  CHECK(x.e(0) == CVec3(1, 0, 0));

  const HelicityEigensystem y = helicity_eigensystem({0, 1, 0});
  CHECK(same_up_to_phase(y.e(1), CVec3(1 / r2, 0, -I / r2), 1e-15));
  CHECK(same_up_to_phase(y.e(-1), CVec3(1 / r2, 0, I / r2), 1e-15));

  const HelicityEigensystem s = helicity_eigensystem({0, 0, -1});
  CHECK(s.e(1) == CVec3(z.e(1).conjugate()));
  CHECK(s.e(0) == CVec3(0, 0, -1));
  CHECK_THROWS_AS(helicity_eigensystem({1.0, 1e-5, 0.0}), DomainError);
  CHECK_THROWS_AS(s.e(2), DomainError);
}

TEST_CASE("helicity eigen-residuals over random and near-pole directions") {
  std::mt19937_64 rng(2024);
  std::vector<Vec3> dirs;
  for (int k = 0; k < 1000; ++k) dirs.push_back(random_direction(rng));
  for (double eps : {1e-7, 1e-9, 1e-12, 0.0}) {
    for (double sgn : {1.0, -1.0}) {
      Vec3 n(eps, -0.5 * eps, sgn);
      dirs.push_back(n / n.norm());
    }
  }
  for (const Vec3& n : dirs) {
    const HelicityEigensystem sys = helicity_eigensystem(n);
    const Mat3c P = spin_projection(n);
    Mat3c basis;
    for (int k = 0; k < 3; ++k) {
      const auto& pr = sys.pairs[k];
      CHECK((P * pr.e - static_cast<double>(pr.lambda) * pr.e).norm() <= 1e-13);
      basis.col(k) = pr.e;
    }
    CHECK((basis.adjoint() * basis - Mat3c::Identity()).norm() <= 1e-13);
    CHECK((sys.e(-1) - sys.e(1).conjugate()).norm() == 0.0);
  }
}

TEST_CASE("eigenvectors are continuous up to phase through the south-pole switch") {
  // the phase winds with the azimuth near n = -e3, so only the ray is continuous
  for (double azimuth : {0.0, 0.7, kPi / 2, 2.5}) {
    const auto at = [&](double eps) {
      Vec3 n(eps * std::cos(azimuth), eps * std::sin(azimuth), -1.0);
      return helicity_eigensystem(n / n.norm()).e(1);
    };
    CHECK(same_up_to_phase(at(0.99e-8), at(1.01e-8), 1e-12));
    CHECK(same_up_to_phase(at(0.0), at(1e-9), 1e-12));
  }
  // approached along the y axis the switch is seamless
  const auto along_y = [](double eps) {
    Vec3 n(0.0, eps, -1.0);
    return helicity_eigensystem(n / n.norm()).e(1);
  };
  CHECK((along_y(0.99e-8) - along_y(1.01e-8)).norm() <= 1e-8);
}

TEST_CASE("polarization decomposition") {
  const Vec3 n = Vec3(0.3, -0.4, 0.5).normalized();
  const HelicityEigensystem sys = helicity_eigensystem(n);
  const HelicityCoefficients c = decompose_polarization(sys.e(1), n);
  CHECK(std::abs(c.plus - 1.0) <= 1e-15);
  CHECK(std::abs(c.zero) <= 1e-15);
  CHECK(std::abs(c.minus) <= 1e-15);
  const CVec3 v(0.2 + 0.1 * I, -1.0, 0.4 * I);
  CHECK((reconstruct(decompose_polarization(v, n), sys) - v).norm() <= 1e-13);
}

TEST_CASE("TM surface field in the helicity bases") {
  for (Direction dir : {Direction::Forward, Direction::Backward}) {
    const SurfaceWaveSpec spec = transpin::test::si_surface(Family::TM, 1.5, 60.0, dir);
    const FieldPhasor f = surface_field_phasor(spec, {1e-7, 0.0, 0.0}, 0.0);
    const CVec3 E = f.E / f.E.norm();
    const auto imbalance = [&](const Vec3& n) {
      const HelicityCoefficients c = decompose_polarization(E, n);
      return std::norm(c.plus) - std::norm(c.minus);
    };
    // the spin lies along y; the x and z projections carry no helicity imbalance
    CHECK(std::abs(imbalance({1, 0, 0})) <= 1e-15);
    CHECK(std::abs(imbalance({0, 0, 1})) <= 1e-15);
    const double sy = analytic_spin_surface(spec, 1e-7).s_e.y();
    CHECK(std::abs(imbalance({0, 1, 0})) > 0.1);
    CHECK(std::signbit(imbalance({0, 1, 0})) == std::signbit(sy));
  }
}

TEST_CASE("spin tensor commutators") {
  const SpinTensorBasis basis = spin_tensor_basis(spin_matrices());
  const auto table = commutator_table(basis);
  REQUIRE(table.size() == 15);
  for (const auto& e : table) CHECK(e.residual <= 1e-14);
  CHECK(closure_rank(basis) == 6);

  // S01 and S23 commute; S12, S13, S23 close on themselves
  for (const auto& e : table) {
    if (e.a == "S01" && e.b == "S23") CHECK(e.terms.empty());
    if (e.a == "S12" && e.b == "S13") {
      REQUIRE(e.terms.size() == 1);
      CHECK(e.terms[0].first == "S23");
      CHECK(e.terms[0].second == I);
    }
  }

  const auto chiral = commutator_table(to_chiral_basis(basis, spin_matrices().U));
  REQUIRE(chiral.size() == table.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    CHECK(chiral[k].terms == table[k].terms);
    CHECK(chiral[k].residual <= 1e-14);
  }
}

TEST_CASE("commutator table matches the recorded fixture") {
  std::ifstream in(TRANSPIN_FIXTURE_DIR "/commutator_table.json");
  REQUIRE(in.good());
  const nlohmann::json fixture = nlohmann::json::parse(in);
  CHECK(fixture == transpin::cli::commutator_table_json());
  CHECK(fixture.at("closure_rank") == 6);
}

TEST_CASE("frozen structure constants") {
  struct Row {
    const char* a;
    const char* b;
    const char* c;
    double im;
  };
  const Row rows[] = {
      {"S01", "S02", "S12", -1}, {"S01", "S03", "S13", -1}, {"S01", "S12", "S02", -1},
      {"S01", "S13", "S03", -1}, {"S01", "S23", "", 0},     {"S02", "S03", "S23", -1},
      {"S02", "S12", "S01", 1},  {"S02", "S13", "", 0},     {"S02", "S23", "S03", -1},
      {"S03", "S12", "", 0},     {"S03", "S13", "S01", 1},  {"S03", "S23", "S02", 1},
      {"S12", "S13", "S23", 1},  {"S12", "S23", "S13", -1}, {"S13", "S23", "S12", 1},
  };
  const auto table = commutator_table(spin_tensor_basis(spin_matrices()));
  REQUIRE(table.size() == 15);
  for (std::size_t k = 0; k < 15; ++k) {
    CHECK(table[k].a == rows[k].a);
    CHECK(table[k].b == rows[k].b);
    if (rows[k].im == 0) {
      CHECK(table[k].terms.empty());
    } else {
      REQUIRE(table[k].terms.size() == 1);
      CHECK(table[k].terms[0].first == rows[k].c);
      CHECK(table[k].terms[0].second == cplx(0.0, rows[k].im));
    }
  }
}
