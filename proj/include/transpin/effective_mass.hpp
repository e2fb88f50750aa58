#pragma once

// Effective rest mass of guided and surface-wave quanta and the relativistic
// identities it satisfies.

#include <array>

#include "transpin/mode_fields.hpp"
#include "transpin/observables.hpp"

namespace transpin {

struct GuidedMassReport {
  double m0 = 0.0;       // hbar omega_c / c^2
  double M0 = 0.0;       // sqrt(W^2 - P_z^2 c^2) / c^2, from the quadrature totals
  double epsilon = 0.0;  // hbar omega
  double p = 0.0;        // hbar k_z
  double v_g = 0.0;
  double v_p = 0.0;
  double W = 0.0;
  double P_z = 0.0;
  double n_quanta = 0.0;
  /// False below cutoff: only m0 is meaningful and every velocity or energy
  /// field is left at zero.
  bool relativistic_identities_apply = false;
};

GuidedMassReport guided_mass_report(const GuidedModeSpec& spec, const QuadratureConfig& cfg = {});

/// Relative residuals of the identities a GuidedMassReport must satisfy.
struct GuidedMassResiduals {
  double energy_momentum = 0.0;     // eps^2 = p^2 c^2 + m0^2 c^4
  double velocity_product = 0.0;    // v_g v_p = c^2
  double photon_energy = 0.0;       // eps = m0 c^2 / sqrt(1 - v^2/c^2)
  double total_energy = 0.0;        // W = M0 c^2 / sqrt(1 - v^2/c^2)
  double total_mass = 0.0;          // M0 = n m0
};

GuidedMassResiduals guided_mass_residuals(const GuidedMassReport& r, double c);

struct DispersionResidual {
  double algebraic = 0.0;  // |w^2 - c^2 kz^2 - wc^2| / w^2
  double stencil = 0.0;    // finite-difference Klein-Gordon operator on a field sample
};

DispersionResidual dispersion_residual(const GuidedModeSpec& spec);

/// Algebraic residual for an arbitrary axial wavenumber (negative controls).
double dispersion_residual_for(const GuidedModeSpec& spec, std::complex<double> k_z);

/// 5-point stencil of (d_t^2/c^2 - d_z^2 + (mass_scale m0)^2 c^2/hbar^2) applied to
/// E_z (TM) or B_z (TE) at an interior point, relative to (w/c)^2 |psi|.
double klein_gordon_stencil_residual(const GuidedModeSpec& spec, double mass_scale = 1.0);

using FourVector = std::array<double, 4>;

/// a_mu b^mu with metric diag(-1, 1, 1, 1).
double minkowski(const FourVector& a, const FourVector& b);

struct FourMomentumSplit {
  FourVector p_total{};
  FourVector p_T{};  // (0, hbar k_perp)
  FourVector p_L{};  // (hbar w / c, 0, 0, hbar k_z)
};

FourMomentumSplit four_momentum_split(const GuidedModeSpec& spec);

struct PhaseIdentity {
  double full = 0.0;   // p_mu x^mu
  double split = 0.0;  // p_T.x_T + p_L.x_L
  double scale = 0.0;  // magnitude scale for relative comparison
};

/// Both sides of the phase split at the event x^mu = (ct, x, y, z).
PhaseIdentity phase_identity(const FourMomentumSplit& s, const FourVector& event);

struct SurfaceMassReport {
  double kappa = 0.0;
  double k_z = 0.0;
  double rho0_surface = 0.0;  // rho0 at x = 0
  double M_s = 0.0;           // closed form
  double M_s_quadrature = 0.0;
  double m_s = 0.0;           // hbar kappa omega / (c^2 |k_z|)
  double epsilon = 0.0;       // hbar omega
  double p = 0.0;             // v hbar omega / c^2
  double v = 0.0;
  double W = 0.0;
  double P_z = 0.0;
  double n_quanta = 0.0;

  /// Rest-mass density profile (kappa |k_z| / 2 w^2) eps0 h'^2 exp(-2 kappa x).
  double rho0_at(double x) const;
};

SurfaceMassReport surface_mass_report(const SurfaceWaveSpec& spec, const QuadratureConfig& cfg = {});

struct SurfaceMassResiduals {
  double total_energy = 0.0;    // W = M_s c^2 / sqrt(1 - v^2/c^2)
  double total_momentum = 0.0;  // P_z = M_s v / sqrt(1 - v^2/c^2)
  double energy_momentum = 0.0; // eps^2 = p^2 c^2 + m_s^2 c^4
  double total_mass = 0.0;      // M_s = n m_s
  double quadrature_mass = 0.0; // A int rho0 dx = M_s
};

SurfaceMassResiduals surface_mass_residuals(const SurfaceMassReport& r, double c);

/// |w^2 - p_z^2 c^2 - rho0^2 c^4| / w^2 at depth x, from the phasor densities.
double surface_pointwise_mass_residual(const SurfaceWaveSpec& spec, double x);

}  // namespace transpin
