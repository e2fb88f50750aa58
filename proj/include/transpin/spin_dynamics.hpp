#pragma once

// Time-averaged spin, energy and momentum densities of harmonic fields.
//
// With the exp(-iwt) time factor the potentials in the phi = 0 gauge are
// A = -iE/w and C = -ic^2 B/w, and the period-averaged spin densities are
//   s_e = (eps0/2) Re(E x A*),   s_m = (eps0/2) Re(B x C*).
// analytic_spin_* give the same quantities in closed form; time_average_oracle
// averages the instantaneous real densities over one period as a third route.

#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "transpin/constants.hpp"
#include "transpin/errors.hpp"
#include "transpin/mode_fields.hpp"
#include "transpin/types.hpp"

namespace transpin {

struct PotentialPhasor {
  CVec3 A = CVec3::Zero();  // magnetic vector potential
  CVec3 C = CVec3::Zero();  // dual (electric) vector potential
};

struct SpinDensityPair {
  Vec3 s_e = Vec3::Zero();
  Vec3 s_m = Vec3::Zero();
};

/// How a report folds the electric and magnetic spin densities into one vector.
enum class SpinCombination {
  Sum,      // s_e + s_m; for a pure TM or TE field this is the non-vanishing one
  Average,  // (s_e + s_m) / 2
};

Vec3 combine(const SpinDensityPair& s, SpinCombination mode);

struct DensityReport {
  double w = 0.0;          // energy density
  Vec3 p = Vec3::Zero();   // momentum density
  SpinDensityPair spin;
};

PotentialPhasor vector_potentials(const FieldPhasor& field, double omega,
                                  const PhysicalConstants& k = PhysicalConstants::si());

SpinDensityPair spin_densities(const FieldPhasor& field, double omega,
                               const PhysicalConstants& k = PhysicalConstants::si());

/// (eps0/4) Re(E.E* + c^2 B.B*)
double energy_density(const FieldPhasor& field,
                      const PhysicalConstants& k = PhysicalConstants::si());

/// (eps0/2) Re(E x B*)
Vec3 momentum_density(const FieldPhasor& field,
                      const PhysicalConstants& k = PhysicalConstants::si());

DensityReport density_report(const FieldPhasor& field, double omega,
                             const PhysicalConstants& k = PhysicalConstants::si());

/// Upper bound 2w/omega on every component of s_e and s_m; used to normalize
/// pointwise tolerances.
double local_density_scale(const FieldPhasor& field, double omega,
                           const PhysicalConstants& k = PhysicalConstants::si());

/// Closed-form spin densities of a guided mode. Zero for evanescent modes.
SpinDensityPair analytic_spin_guided(const GuidedModeSpec& spec, const Point3& p);

/// Closed-form spin densities of a surface wave at depth x >= 0.
SpinDensityPair analytic_spin_surface(const SurfaceWaveSpec& spec, double x);

/// Real parts of a phasor evaluated at time t.
struct RealFields {
  Vec3 E = Vec3::Zero();
  Vec3 B = Vec3::Zero();
  Vec3 A = Vec3::Zero();
  Vec3 C = Vec3::Zero();
};

/// Instantaneous real fields and potentials from a phasor that already
/// contains its time factor.
RealFields instantaneous(const FieldPhasor& field_at_t, double omega,
                         const PhysicalConstants& k = PhysicalConstants::si());

/// eps0 E x A and eps0 B x C of the real fields.
SpinDensityPair instantaneous_spin(const RealFields& r, const PhysicalConstants& k);

/// (eps0/2)(E.E + c^2 B.B) of the real fields.
double instantaneous_energy(const RealFields& r, const PhysicalConstants& k);

/// Uniform-grid average of sampler(t) over one period 2 pi / omega.
/// Exact for trigonometric integrands whose harmonic content is below samples/2.
template <class Sampler>
auto time_average_oracle(Sampler&& sampler, double omega, int samples) {
  if (samples < 4) throw ConfigError("time_average_oracle needs at least 4 samples");
  if (!(omega > 0.0)) throw DomainError("time_average_oracle needs omega > 0");
  const double period = 2.0 * kPi / omega;
  using Value = std::decay_t<decltype(sampler(0.0))>;
  Value acc = sampler(0.0);
  for (int k = 1; k < samples; ++k) {
    acc = acc + sampler(period * k / samples);
  }
  return Value(acc / static_cast<double>(samples));
}

}  // namespace transpin
