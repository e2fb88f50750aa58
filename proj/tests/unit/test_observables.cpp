#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "transpin/errors.hpp"
#include "transpin/observables.hpp"

using namespace transpin;
using transpin::test::natural_guided;
using transpin::test::si_guided;
using transpin::test::si_surface;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("quadrature totals match the closed forms with the degeneracy factor") {
  const struct {
    Family f;
    int m, n;
  } modes[] = {{Family::TM, 1, 1}, {Family::TM, 2, 1}, {Family::TM, 2, 2},
               {Family::TE, 1, 0}, {Family::TE, 1, 1}, {Family::TE, 2, 1}};
  for (const auto& md : modes) {
    for (double ratio : {1.1, std::sqrt(2.0), 2.0}) {
      const GuidedModeSpec spec = si_guided(md.f, md.m, md.n, ratio);
      const GuidedObservables o = integrate_guided(spec);
      const GuidedClosedForms cf = guided_closed_forms(spec);
      CHECK(rel(o.W, cf.W) <= 1e-9);
      CHECK(rel(o.P_z, cf.P_z) <= 1e-9);
      CHECK(rel(o.S_perp, cf.S_perp) <= 1e-9);
      CHECK(std::abs(o.balance) <= 1e-12 * o.W);
    }
  }
}

TEST_CASE("the n = 0 family carries twice the g = 1 closed form") {
  const GuidedModeSpec te10 = si_guided(Family::TE, 1, 0, 1.5);
  CHECK(degeneracy_factor(te10.index) == 2.0);
  CHECK(degeneracy_factor({Family::TE, 1, 1}) == 1.0);
  CHECK(degeneracy_factor({Family::TM, 1, 1}) == 1.0);
  const GuidedObservables o = integrate_guided(te10);
  const GuidedClosedForms g1 = guided_closed_forms(te10, false);
  CHECK(o.W / g1.W == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(o.P_z / g1.P_z == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(o.S_perp / g1.S_perp == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("amplitude for n quanta round-trips") {
  for (int n : {1, 2, 5}) {
    const GuidedModeSpec spec = with_quanta(si_guided(Family::TM, 2, 1, 1.7), n);
    const GuidedObservables o = integrate_guided(spec);
    const double hbar = spec.constants.hbar;
    CHECK(o.W == doctest::Approx(n * hbar * spec.omega).epsilon(1e-9));
    REQUIRE(o.n_quanta_integer.has_value());
    CHECK(*o.n_quanta_integer == n);
    CHECK(o.S_perp == doctest::Approx(quantized_transverse_spin_guided(n, spec)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(amplitude_for_quanta(0, si_guided(Family::TM, 1, 1, 1.5)), DomainError);
  CHECK_THROWS_AS(amplitude_for_quanta(1, si_guided(Family::TM, 1, 1, 0.9)), DomainError);
  CHECK(as_integer_quanta(2.0000000001) == 2L);
  CHECK_FALSE(as_integer_quanta(2.01).has_value());
}

TEST_CASE("transverse spin per quantum peaks at hbar for omega = sqrt(2) omega_c") {
  const auto spin_at = [](double ratio) {
    const GuidedModeSpec s = with_quanta(si_guided(Family::TE, 1, 1, ratio), 1);
    return integrate_guided(s).S_perp / s.constants.hbar;
  };
  const double peak = spin_at(std::sqrt(2.0));
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spin_at(1.3) < peak);
  CHECK(spin_at(1.5) < peak);
  const GuidedModeSpec back = with_quanta(si_guided(Family::TE, 1, 1, std::sqrt(2.0), Direction::Backward), 1);
  CHECK(integrate_guided(back).S_perp / back.constants.hbar == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("energy velocity equals the group velocity") {
  GuidedModeSpec spec = si_guided(Family::TM, 1, 1, 1.6);
  const GuidedObservables o = integrate_guided(spec);
  const double c = spec.constants.c;
  const double wc = guided_params(spec).omega_c;
  const double dw = 1e-4 * spec.omega;
  const auto kz = [&](double w) { return std::sqrt(w * w - wc * wc) / c; };
  const double v_fd = 2.0 * dw / (kz(spec.omega + dw) - kz(spec.omega - dw));
  CHECK(rel(o.v, v_fd) <= 1e-6);
  CHECK(energy_velocity(o.W, o.P_z, c) == o.v);
  CHECK(std::cos(o.theta) == doctest::Approx(guided_params(spec).k_z.real() * c / spec.omega).epsilon(1e-12));
  CHECK(o.e == doctest::Approx(std::tan(o.theta)).epsilon(1e-9));
}

TEST_CASE("integration guards") {
  const GuidedModeSpec spec = si_guided(Family::TM, 2, 2, 1.5);
  QuadratureConfig coarse;
  coarse.nodes_x = minimum_nodes(spec.index) - 1;
  try {
    integrate_guided(spec, coarse);
    FAIL("expected ResolutionError");
  } catch (const ResolutionError& e) {
    CHECK(e.suggested() >= minimum_nodes(spec.index));
  }
  CHECK(minimum_nodes({Family::TM, 2, 2}) == 10);
  CHECK_THROWS_AS(integrate_guided(si_guided(Family::TM, 2, 2, 0.8)), DomainError);

  QuadratureConfig shallow;
  shallow.surface_depth = 5.0;
  CHECK_THROWS_AS(integrate_surface(si_surface(Family::TM, 1.5, 60.0), shallow), ResolutionError);
}

TEST_CASE("ellipticity of guided modes") {
  const GuidedModeSpec tm = si_guided(Family::TM, 2, 1, 1.8);
  const Ellipticity e = ellipticity_guided(tm);
  CHECK_FALSE(e.extrapolated);
  const GuidedModeParams p = guided_params(tm);
  const double c = tm.constants.c;
  CHECK(e.e == doctest::Approx(p.omega_c / (c * p.k_z.real())).epsilon(1e-9));
  CHECK(e.e == doctest::Approx(e.h_long / e.h_perp).epsilon(1e-12));

  const GuidedModeSpec te = si_guided(Family::TE, 1, 0, 1.8);
  CHECK_THROWS_AS(ellipticity_guided(te), UnsupportedDerivationError);
  const Ellipticity m = ellipticity_guided_magnetic(te);
  CHECK(m.extrapolated);
  CHECK(m.e == doctest::Approx(integrate_guided(te).e).epsilon(1e-9));
}

TEST_CASE("balance integral detects an unbalanced field") {
  const GuidedModeSpec spec = si_guided(Family::TM, 1, 1, 1.5);
  const double W = integrate_guided(spec).W;
  CHECK(std::abs(balance_integral(spec)) <= 1e-12 * W);
  const FieldEvaluator electric_only = [&](const Point3& p) {
    FieldPhasor f = guided_field_phasor(spec, p, 0.0);
    f.B.setZero();
    return f;
  };
  CHECK(balance_integral(spec, electric_only) == doctest::Approx(W).epsilon(1e-9));
}

TEST_CASE("rms spin diagnostic") {
  // |s| integrates to sqrt of the mean square; ratios follow from the mode shape
  const GuidedObservables te10 = integrate_guided(si_guided(Family::TE, 1, 0, 1.5));
  CHECK(te10.S_perp_rms / te10.S_perp == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  const GuidedObservables tm11 = integrate_guided(natural_guided(Family::TM, 1, 1, 1.5, 1.0, 1.0));
  CHECK(tm11.S_perp_rms / tm11.S_perp == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("surface wave totals") {
  for (Family fam : {Family::TM, Family::TE}) {
    for (double eta : {1.45, 2.0}) {
      for (double phi : {50.0, 70.0}) {
        const SurfaceWaveSpec spec = si_surface(fam, eta, phi);
        const SurfaceObservables o = integrate_surface(spec);
        const SurfaceClosedForms cf = surface_closed_forms(spec);
        CHECK(rel(o.W, cf.W) <= 1e-9);
        CHECK(rel(o.P_z, cf.P_z) <= 1e-9);
        CHECK(rel(o.S_y, cf.S_y) <= 1e-9);
        const SurfaceWaveParams p = surface_params(spec);
        CHECK(o.v == doctest::Approx(spec.omega / p.k_z).epsilon(1e-12));
        CHECK(o.e == doctest::Approx(ellipticity_surface(spec)).epsilon(1e-12));
        CHECK(std::tan(o.theta_prime) == doctest::Approx(p.kappa / p.k_z).epsilon(1e-12));
        CHECK(o.truncation_tail <= 1e-12);
      }
    }
  }
}

TEST_CASE("surface wave quantization") {
  const SurfaceWaveSpec spec = with_quanta(si_surface(Family::TM, 1.5, 60.0), 3);
  const SurfaceObservables sum = integrate_surface(spec);
  const SurfaceObservables avg = integrate_surface(spec, {}, SpinCombination::Average);
  const double hbar = spec.constants.hbar;
  const SurfaceWaveParams p = surface_params(spec);
  CHECK(sum.W == doctest::Approx(3 * hbar * spec.omega).epsilon(1e-9));
  CHECK(sum.S_y == doctest::Approx(6.0 * hbar * p.kappa / p.k_z).epsilon(1e-9));
  CHECK(avg.S_y == doctest::Approx(3.0 * hbar * p.kappa / p.k_z).epsilon(1e-9));
  CHECK(quantized_transverse_spin_surface(3, spec, SpinCombination::Average) ==
        doctest::Approx(avg.S_y).epsilon(1e-9));
  // momentum per quantum is hbar w^2 / (k_z c^2), below hbar k_z
  const double c = spec.constants.c;
  CHECK(sum.P_z == doctest::Approx(3 * hbar * spec.omega * spec.omega / (p.k_z * c * c)).epsilon(1e-9));
  CHECK(sum.P_z / (3 * hbar * p.k_z) ==
        doctest::Approx(1.0 - p.kappa * p.kappa / (p.k_z * p.k_z)).epsilon(1e-9));
}
