#pragma once

// Phasor fields of rectangular-waveguide TM/TE modes and of planar evanescent
// surface waves in the vacuum half-space x >= 0.
//
// Phase conventions: guided fields carry exp[-i(wt - kz z)], surface fields
// carry exp[i(kz z - wt) - kappa x]. Both share the exp(-iwt) time factor.

#include <complex>
#include <string_view>

#include "transpin/constants.hpp"
#include "transpin/types.hpp"

namespace transpin {

struct WaveguideGeometry {
  double a = 1.0;  // width along x
  double b = 1.0;  // height along y
  double L = 1.0;  // length along z

  double volume() const { return a * b * L; }
  /// Throws DomainError unless a >= b > 0 and L > 0.
  void validate() const;
};

struct ModeIndex {
  Family family = Family::TM;
  int m = 1;
  int n = 1;

  /// Throws RejectedModeError for TM with m*n == 0 or TE with m == 0 (or negatives).
  void validate() const;
};

struct GuidedModeSpec {
  WaveguideGeometry geometry;
  ModeIndex index;
  double omega = 1.0;
  /// E0 for TM, c*B0 for TE.
  double amplitude_h = 1.0;
  Direction direction = Direction::Forward;
  PhysicalConstants constants = PhysicalConstants::si();

  void validate() const;
};

struct SurfaceWaveSpec {
  Family family = Family::TM;
  double eta = 1.5;  // refractive index of the dense medium (x < 0)
  double phi = 1.0;  // incidence angle, rad
  double omega = 1.0;
  /// c*a0 for TM, b0 for TE.
  double amplitude_hp = 1.0;
  double area_A = 1.0;  // regularization area of the (y, z) plane
  Direction direction = Direction::Forward;
  PhysicalConstants constants = PhysicalConstants::si();

  /// Throws DomainError unless eta sin(phi) > 1 and all magnitudes are positive.
  void validate() const;
};

std::string_view to_string(Family f);
std::string_view to_string(Direction d);

/// c*pi*sqrt((m/a)^2 + (n/b)^2).
double cutoff_frequency(const WaveguideGeometry& geometry, const ModeIndex& index,
                        const PhysicalConstants& k = PhysicalConstants::si());

/// Real sqrt(w^2 - wc^2)/c above cutoff, i*sqrt(wc^2 - w^2)/c below it.
/// Backward direction negates the whole value.
std::complex<double> axial_wavenumber(double omega, double omega_c, double c,
                                      Direction direction = Direction::Forward);

/// Quantities of a guided mode that every downstream formula needs.
struct GuidedModeParams {
  double omega_c = 0.0;
  std::complex<double> k_z;
  double kx = 0.0;  // m pi / a
  double ky = 0.0;  // n pi / b
  bool propagating = false;
};

GuidedModeParams guided_params(const GuidedModeSpec& spec);

/// Full phasor of the mode at (x, y, z) and time t. Throws DomainError outside
/// the cross-section.
FieldPhasor guided_field_phasor(const GuidedModeSpec& spec, const Point3& p, double t);

struct SurfaceWaveParams {
  double kappa = 0.0;  // decay constant along +x
  double k_z = 0.0;    // signed propagation constant
};

/// kappa = (w/c) sqrt(eta^2 sin^2 phi - 1), k_z = +-(w/c) eta sin phi.
SurfaceWaveParams surface_params(const SurfaceWaveSpec& spec);

/// TM: (E_x, E_z, B_y); TE: (E_y, B_x, B_z). Throws DomainError for x < 0.
FieldPhasor surface_field_phasor(const SurfaceWaveSpec& spec, const Point3& p, double t);

}  // namespace transpin
