#pragma once

// Volume and half-space totals of the time-averaged densities, and the
// quantization, ellipticity and velocity laws they obey.
//
// Total transverse spin of a guided mode. The spin density integrates to a zero
// vector over the cross-section, so the total is taken from the polarization
// ellipse of the spin-carrying field F (E for TM, c*B for TE):
//
//   S_perp = sign(k_z) * (4 / omega) * sqrt(U_T * U_L),
//   U_T = (eps0/4) int |F_x|^2 + |F_y|^2 dV,   U_L = (eps0/4) int |F_z|^2 dV.
//
// Pointwise the same construction gives |s| = 4 sqrt(u_T u_L) / omega exactly,
// because F_z is a quarter period out of phase with (F_x, F_y). With the
// energy split fixed by the ellipticity this reduces to W sin(2 theta) / omega.
// See docs/derivations.md.

#include <functional>
#include <optional>

#include "transpin/mode_fields.hpp"
#include "transpin/spin_dynamics.hpp"

namespace transpin {

struct QuadratureConfig {
  int nodes_x = 0;  // 0 picks default_nodes()
  int nodes_y = 0;
  int nodes_z = 2;  // totals are z-independent; one node would do
  int surface_panels = 20;
  int surface_nodes_per_panel = 16;
  double surface_depth = 20.0;  // truncation depth in decay lengths 1/kappa
  bool parallel = true;
};

/// 2(m + n) + 2: smallest per-axis node count accepted for a guided mode.
int minimum_nodes(const ModeIndex& index);

/// Node count used when the config leaves it at 0.
int default_nodes(const ModeIndex& index);

/// 2 for the n = 0 family (TE_m0), whose cos^2(n pi y / b) factor averages to 1
/// instead of 1/2; 1 otherwise.
double degeneracy_factor(const ModeIndex& index);

struct GuidedClosedForms {
  double W = 0.0;
  double P_z = 0.0;
  double S_perp = 0.0;
};

/// W = g eps0 w^2 V h^2 / (8 wc^2), P_z = g eps0 w kz V h^2 / (8 wc^2),
/// S_perp = g eps0 c kz V h^2 / (4 wc w), with g = degeneracy_factor(index)
/// when `apply_degeneracy_factor` is set and g = 1 otherwise.
GuidedClosedForms guided_closed_forms(const GuidedModeSpec& spec,
                                      bool apply_degeneracy_factor = true);

struct GuidedObservables {
  double W = 0.0;
  double P_z = 0.0;
  double S_perp = 0.0;
  double v = 0.0;      // energy velocity
  double theta = 0.0;  // in [0, pi/2]; cos(theta) = |k_z c / omega|
  double e = 0.0;      // tan(theta), from the quadrature energy split
  double n_quanta = 0.0;
  std::optional<long> n_quanta_integer;  // set when within 1e-6 of an integer

  double U_transverse = 0.0;    // transverse energy of the spin-carrying field
  double U_longitudinal = 0.0;  // longitudinal energy of the spin-carrying field
  double S_perp_rms = 0.0;      // V * sqrt(<s_x^2 + s_y^2>), diagnostic only
  double balance = 0.0;         // (eps0/4) int Re(E.E* - c^2 B.B*) dV
};

/// Tensor-product Gauss-Legendre totals over [0,a]x[0,b]x[0,L].
/// Throws DomainError for evanescent modes and ResolutionError for node counts
/// below minimum_nodes().
GuidedObservables integrate_guided(const GuidedModeSpec& spec, const QuadratureConfig& cfg = {});

/// P_z c^2 / W.
double energy_velocity(double W, double P_z, double c);

/// Amplitude h for which W = n hbar omega (n >= 1).
double amplitude_for_quanta(int n, const GuidedModeSpec& spec);

/// Amplitude h' for which the surface-wave total energy is n hbar omega.
double amplitude_for_quanta(int n, const SurfaceWaveSpec& spec);

/// Copies of the spec with the amplitude set for n quanta.
GuidedModeSpec with_quanta(GuidedModeSpec spec, int n);
SurfaceWaveSpec with_quanta(SurfaceWaveSpec spec, int n);

/// 2 n hbar (v/c) sqrt(1 - v^2/c^2) = +-n hbar sin(2 theta).
double quantized_transverse_spin_guided(int n, const GuidedModeSpec& spec);

struct Ellipticity {
  double e = 0.0;
  double theta = 0.0;
  double h_perp = 0.0;  // sqrt(<|F_x|^2 + |F_y|^2>)
  double h_long = 0.0;  // sqrt(<|F_z|^2>)
  bool extrapolated = false;
};

/// Electric-field ellipticity of a TM mode from cross-section averages.
/// TE input throws UnsupportedDerivationError.
Ellipticity ellipticity_guided(const GuidedModeSpec& spec, const QuadratureConfig& cfg = {});

/// Same construction on the magnetic field; meaningful for TE modes.
/// Always flagged `extrapolated`.
Ellipticity ellipticity_guided_magnetic(const GuidedModeSpec& spec,
                                        const QuadratureConfig& cfg = {});

using FieldEvaluator = std::function<FieldPhasor(const Point3&)>;

/// (eps0/4) int Re(E.E* - c^2 B.B*) dV for the mode; vanishes for every mode.
double balance_integral(const GuidedModeSpec& spec, const QuadratureConfig& cfg = {});

/// Same integral for an arbitrary field over the spec's guide volume.
double balance_integral(const GuidedModeSpec& spec, const FieldEvaluator& field,
                        const QuadratureConfig& cfg = {});

struct SurfaceClosedForms {
  double W = 0.0;
  double P_z = 0.0;
  double S_y = 0.0;
};

/// W = kz^2 c^2 eps0 A h'^2 / (4 kappa w^2), P_z = kz eps0 A h'^2 / (4 kappa w),
/// S_y = kz c^2 eps0 A h'^2 / (2 w^3).
SurfaceClosedForms surface_closed_forms(const SurfaceWaveSpec& spec);

struct SurfaceObservables {
  double W = 0.0;
  double P_z = 0.0;
  double S_y = 0.0;
  double v = 0.0;
  double theta_prime = 0.0;  // atan(kappa / k_z), in [-pi/4, pi/4]
  double e = 0.0;            // kappa / |k_z|
  double n_quanta = 0.0;
  std::optional<long> n_quanta_integer;
  double truncation_tail = 0.0;  // exp(-2 kappa x_max), relative
};

/// Composite Gauss-Legendre over x in [0, depth/kappa], times area_A.
/// Throws ResolutionError when the truncated tail exceeds 1e-12.
SurfaceObservables integrate_surface(const SurfaceWaveSpec& spec, const QuadratureConfig& cfg = {},
                                     SpinCombination combination = SpinCombination::Sum);

/// 2 n hbar kappa / k_z (Sum) or n hbar kappa / k_z (Average).
double quantized_transverse_spin_surface(int n, const SurfaceWaveSpec& spec,
                                         SpinCombination combination = SpinCombination::Sum);

/// |E_z / E_x| (TM) or |B_z / B_x| (TE) of the phasor, equal to kappa / |k_z|.
double ellipticity_surface(const SurfaceWaveSpec& spec);

/// Rounded value when within 1e-6 of an integer.
std::optional<long> as_integer_quanta(double n_quanta);

}  // namespace transpin
