#include "transpin/effective_mass.hpp"

#include <cmath>

#include "transpin/errors.hpp"
#include "transpin/kernels.hpp"
#include "transpin/quadrature.hpp"
#include "transpin/spin_dynamics.hpp"

namespace transpin {

namespace {

double rel(double actual, double expected) {
  const double scale = std::abs(expected);
  return scale > 0.0 ? std::abs(actual - expected) / scale : std::abs(actual);
}

// sqrt(1 - beta^2) without cancellation near beta = 1.
double inverse_gamma(double beta) { return std::sqrt((1.0 - beta) * (1.0 + beta)); }

}  // namespace

GuidedMassReport guided_mass_report(const GuidedModeSpec& spec, const QuadratureConfig& cfg) {
  const GuidedModeParams p = guided_params(spec);
  const auto& k = spec.constants;
  GuidedMassReport r;
  r.m0 = k.hbar * p.omega_c / (k.c * k.c);
  r.epsilon = k.hbar * spec.omega;
  if (p.k_z.imag() != 0.0) return r;

  const double kz = p.k_z.real();
  const GuidedObservables obs = integrate_guided(spec, cfg);
  r.relativistic_identities_apply = true;
  r.p = k.hbar * kz;
  r.v_g = kz * k.c * k.c / spec.omega;
  r.v_p = kz != 0.0 ? spec.omega / kz : std::numeric_limits<double>::infinity();
  r.W = obs.W;
  r.P_z = obs.P_z;
  r.n_quanta = obs.n_quanta;
  const double cP = obs.P_z * k.c;
  r.M0 = std::sqrt((obs.W - cP) * (obs.W + cP)) / (k.c * k.c);
  return r;
}

GuidedMassResiduals guided_mass_residuals(const GuidedMassReport& r, double c) {
  GuidedMassResiduals out;
  if (!r.relativistic_identities_apply) return out;
  const double c2 = c * c;
  const double pc = r.p * c;
  const double m0c2 = r.m0 * c2;
  out.energy_momentum = rel(r.epsilon * r.epsilon, pc * pc + m0c2 * m0c2);
  out.velocity_product = rel(r.v_g * r.v_p, c2);
  const double beta = r.v_g / c;
  out.photon_energy = rel(r.epsilon, m0c2 / inverse_gamma(beta));
  out.total_energy = rel(r.W, r.M0 * c2 / inverse_gamma(beta));
  out.total_mass = rel(r.M0, r.n_quanta * r.m0);
  return out;
}

double dispersion_residual_for(const GuidedModeSpec& spec, std::complex<double> k_z) {
  const GuidedModeParams p = guided_params(spec);
  const double w2 = spec.omega * spec.omega;
  const double c = spec.constants.c;
  return std::abs(w2 - c * c * k_z * k_z - p.omega_c * p.omega_c) / w2;
}

double klein_gordon_stencil_residual(const GuidedModeSpec& spec, double mass_scale) {
  const GuidedModeParams p = guided_params(spec);
  const auto& k = spec.constants;
  const auto& g = spec.geometry;
  const double w = spec.omega;
  const double kz_mag = std::abs(p.k_z);
  const double dt = 1e-3 * (2.0 * kPi / w);
  const double dz = 1e-3 * (2.0 * kPi / (kz_mag > 0.0 ? kz_mag : w / k.c));
  const Point3 at{0.3 * g.a, 0.4 * g.b, 0.2 * g.L};
  const double t0 = 0.1 * (2.0 * kPi / w);

  auto psi = [&](double t, double z) {
    const FieldPhasor f = guided_field_phasor(spec, {at.x, at.y, z}, t);
    return spec.index.family == Family::TM ? f.E.z() : f.B.z();
  };
  auto second = [](cplx m2, cplx m1, cplx c0, cplx p1, cplx p2, double h) {
    return (-m2 + 16.0 * m1 - 30.0 * c0 + 16.0 * p1 - p2) / (12.0 * h * h);
  };
  const cplx center = psi(t0, at.z);
  const cplx d2t = second(psi(t0 - 2 * dt, at.z), psi(t0 - dt, at.z), center,
                          psi(t0 + dt, at.z), psi(t0 + 2 * dt, at.z), dt);
  const cplx d2z = second(psi(t0, at.z - 2 * dz), psi(t0, at.z - dz), center,
                          psi(t0, at.z + dz), psi(t0, at.z + 2 * dz), dz);
  const double m0 = mass_scale * k.hbar * p.omega_c / (k.c * k.c);
  const double mass_term = m0 * k.c / k.hbar;
  const cplx op = d2t / (k.c * k.c) - d2z + mass_term * mass_term * center;
  const double scale = (w / k.c) * (w / k.c) * std::abs(center);
  return std::abs(op) / scale;
}

DispersionResidual dispersion_residual(const GuidedModeSpec& spec) {
  const GuidedModeParams p = guided_params(spec);
  return {dispersion_residual_for(spec, p.k_z), klein_gordon_stencil_residual(spec)};
}

double minkowski(const FourVector& a, const FourVector& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

FourMomentumSplit four_momentum_split(const GuidedModeSpec& spec) {
  const GuidedModeParams p = guided_params(spec);
  if (p.k_z.imag() != 0.0) {
    throw DomainError("four-momentum split needs a real axial wavenumber");
  }
  const auto& k = spec.constants;
  const double e = k.hbar * spec.omega / k.c;
  const double kz = p.k_z.real();
  FourMomentumSplit s;
  s.p_total = {e, k.hbar * p.kx, k.hbar * p.ky, k.hbar * kz};
  s.p_T = {0.0, k.hbar * p.kx, k.hbar * p.ky, 0.0};
  s.p_L = {e, 0.0, 0.0, k.hbar * kz};
  return s;
}

PhaseIdentity phase_identity(const FourMomentumSplit& s, const FourVector& x) {
  const FourVector x_T{0.0, x[1], x[2], 0.0};
  const FourVector x_L{x[0], 0.0, 0.0, x[3]};
  PhaseIdentity out;
  out.full = minkowski(s.p_total, x);
  out.split = minkowski(s.p_T, x_T) + minkowski(s.p_L, x_L);
  double sp = 0.0, sx = 0.0;
  for (int i = 0; i < 4; ++i) {
    sp += s.p_total[i] * s.p_total[i];
    sx += x[i] * x[i];
  }
  out.scale = std::sqrt(sp * sx);
  return out;
}

double SurfaceMassReport::rho0_at(double x) const {
  if (x < 0.0) throw DomainError("rest-mass density is defined only for x >= 0");
  return rho0_surface * std::exp(-2.0 * kappa * x);
}

SurfaceMassReport surface_mass_report(const SurfaceWaveSpec& spec, const QuadratureConfig& cfg) {
  const SurfaceWaveParams p = surface_params(spec);
  const auto& k = spec.constants;
  const double w = spec.omega;
  const double h2 = spec.amplitude_hp * spec.amplitude_hp;
  const double kz = std::abs(p.k_z);
  const SurfaceClosedForms cf = surface_closed_forms(spec);

  SurfaceMassReport r;
  r.kappa = p.kappa;
  r.k_z = p.k_z;
  r.rho0_surface = p.kappa * kz / (2.0 * w * w) * k.eps0 * h2;
  r.M_s = kz * k.eps0 * spec.area_A * h2 / (4.0 * w * w);
  r.m_s = k.hbar * p.kappa * w / (k.c * k.c * kz);
  r.W = cf.W;
  r.P_z = cf.P_z;
  r.v = energy_velocity(cf.W, cf.P_z, k.c);
  r.epsilon = k.hbar * w;
  r.p = r.v * k.hbar * w / (k.c * k.c);
  r.n_quanta = cf.W / (k.hbar * w);

  const QuadratureRule rule = composite_gauss_legendre(
      cfg.surface_nodes_per_panel, cfg.surface_panels, 0.0, cfg.surface_depth / p.kappa);
  auto integrand = [&](double x) { return kernels::Values<1>{r.rho0_at(x)}; };
  const auto q = cfg.parallel ? kernels::line_quadrature<1>(rule, integrand)
                              : kernels::line_quadrature_serial<1>(rule, integrand);
  r.M_s_quadrature = spec.area_A * q[0];
  return r;
}

SurfaceMassResiduals surface_mass_residuals(const SurfaceMassReport& r, double c) {
  const double c2 = c * c;
  const double ig = inverse_gamma(r.v / c);
  SurfaceMassResiduals out;
  out.total_energy = rel(r.W, r.M_s * c2 / ig);
  out.total_momentum = rel(r.P_z, r.M_s * r.v / ig);
  const double pc = r.p * c;
  const double mc2 = r.m_s * c2;
  out.energy_momentum = rel(r.epsilon * r.epsilon, pc * pc + mc2 * mc2);
  out.total_mass = rel(r.M_s, r.n_quanta * r.m_s);
  out.quadrature_mass = rel(r.M_s_quadrature, r.M_s);
  return out;
}

double surface_pointwise_mass_residual(const SurfaceWaveSpec& spec, double x) {
  const FieldPhasor f = surface_field_phasor(spec, {x, 0.0, 0.0}, 0.0);
  const auto& k = spec.constants;
  const double w = energy_density(f, k);
  const double pz = momentum_density(f, k).z();
  const SurfaceMassReport r = [&] {
    // Only the density profile is needed here; skip the quadrature.
    const SurfaceWaveParams p = surface_params(spec);
    SurfaceMassReport m;
    m.kappa = p.kappa;
    m.rho0_surface = p.kappa * std::abs(p.k_z) / (2.0 * spec.omega * spec.omega) * k.eps0 *
                     spec.amplitude_hp * spec.amplitude_hp;
    return m;
  }();
  const double rho_c2 = r.rho0_at(x) * k.c * k.c;
  const double pc = pz * k.c;
  return std::abs((w - pc) * (w + pc) - rho_c2 * rho_c2) / (w * w);
}

}  // namespace transpin
