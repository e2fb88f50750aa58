#include "transpin/spin_dynamics.hpp"

#include <cmath>

namespace transpin {

namespace {

constexpr cplx kI{0.0, 1.0};

Vec3 re(const CVec3& v) { return v.real(); }

}  // namespace

Vec3 combine(const SpinDensityPair& s, SpinCombination mode) {
  const Vec3 sum = s.s_e + s.s_m;
  return mode == SpinCombination::Sum ? sum : Vec3(0.5 * sum);
}

PotentialPhasor vector_potentials(const FieldPhasor& field, double omega,
                                  const PhysicalConstants& k) {
  if (!(omega > 0.0)) throw DomainError("vector_potentials needs omega > 0");
  PotentialPhasor p;
  p.A = (-kI / omega) * field.E;
  p.C = (-kI * k.c * k.c / omega) * field.B;
  return p;
}

SpinDensityPair spin_densities(const FieldPhasor& field, double omega,
                               const PhysicalConstants& k) {
  const PotentialPhasor pot = vector_potentials(field, omega, k);
  SpinDensityPair s;
  s.s_e = 0.5 * k.eps0 * re(field.E.cross(pot.A.conjugate()));
  s.s_m = 0.5 * k.eps0 * re(field.B.cross(pot.C.conjugate()));
  return s;
}

double energy_density(const FieldPhasor& field, const PhysicalConstants& k) {
  return 0.25 * k.eps0 * (field.E.squaredNorm() + k.c * k.c * field.B.squaredNorm());
}

Vec3 momentum_density(const FieldPhasor& field, const PhysicalConstants& k) {
  return 0.5 * k.eps0 * re(field.E.cross(field.B.conjugate()));
}

DensityReport density_report(const FieldPhasor& field, double omega,
                             const PhysicalConstants& k) {
  return {energy_density(field, k), momentum_density(field, k),
          spin_densities(field, omega, k)};
}

double local_density_scale(const FieldPhasor& field, double omega, const PhysicalConstants& k) {
  return 2.0 * energy_density(field, k) / omega;
}

SpinDensityPair analytic_spin_guided(const GuidedModeSpec& spec, const Point3& pt) {
  const GuidedModeParams p = guided_params(spec);
  const auto& g = spec.geometry;
  if (pt.x < 0.0 || pt.x > g.a || pt.y < 0.0 || pt.y > g.b) {
    throw DomainError("point lies outside the waveguide cross-section");
  }
  SpinDensityPair s;
  // Below cutoff every field component shares one real phase: no spin.
  if (p.k_z.imag() != 0.0) return s;

  const double h2 = spec.amplitude_h * spec.amplitude_h;
  const double K = p.k_z.real() * h2 /
                   (2.0 * spec.constants.mu0 * p.omega_c * p.omega_c * spec.omega);
  const double sx = std::sin(p.kx * pt.x), cx = std::cos(p.kx * pt.x);
  const double sy = std::sin(p.ky * pt.y), cy = std::cos(p.ky * pt.y);
  const double s2x = std::sin(2.0 * p.kx * pt.x), s2y = std::sin(2.0 * p.ky * pt.y);

  if (spec.index.family == Family::TM) {
    s.s_e = Vec3(-p.ky * K * sx * sx * s2y, p.kx * K * s2x * sy * sy, 0.0);
  } else {
    s.s_m = Vec3(p.ky * K * cx * cx * s2y, -p.kx * K * s2x * cy * cy, 0.0);
  }
  return s;
}

SpinDensityPair analytic_spin_surface(const SurfaceWaveSpec& spec, double x) {
  const SurfaceWaveParams p = surface_params(spec);
  if (x < 0.0) throw DomainError("surface-wave densities are defined only for x >= 0");
  const auto& k = spec.constants;
  const double w = spec.omega;
  const double sy = k.eps0 * spec.amplitude_hp * spec.amplitude_hp * p.kappa * p.k_z * k.c *
                    k.c / (w * w * w) * std::exp(-2.0 * p.kappa * x);
  SpinDensityPair s;
  if (spec.family == Family::TM) {
    s.s_e = Vec3(0.0, sy, 0.0);
  } else {
    s.s_m = Vec3(0.0, sy, 0.0);
  }
  return s;
}

RealFields instantaneous(const FieldPhasor& f, double omega, const PhysicalConstants& k) {
  const PotentialPhasor pot = vector_potentials(f, omega, k);
  return {re(f.E), re(f.B), re(pot.A), re(pot.C)};
}

SpinDensityPair instantaneous_spin(const RealFields& r, const PhysicalConstants& k) {
  return {k.eps0 * r.E.cross(r.A), k.eps0 * r.B.cross(r.C)};
}

double instantaneous_energy(const RealFields& r, const PhysicalConstants& k) {
  return 0.5 * k.eps0 * (r.E.squaredNorm() + k.c * k.c * r.B.squaredNorm());
}

}  // namespace transpin
