#include "transpin/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "transpin/errors.hpp"
#include "transpin/kernels.hpp"
#include "transpin/quadrature.hpp"

namespace transpin {

namespace {

struct GuidedRules {
  QuadratureRule x, y, z;
};

int resolve_nodes(int requested, const ModeIndex& index, const char* axis) {
  const int n = requested > 0 ? requested : default_nodes(index);
  if (n < minimum_nodes(index)) {
    throw ResolutionError(std::string("quadrature along ") + axis + " has " + std::to_string(n) +
                              " nodes, too few for mode indices (" + std::to_string(index.m) +
                              ", " + std::to_string(index.n) + ")",
                          default_nodes(index));
  }
  return n;
}

GuidedRules guided_rules(const GuidedModeSpec& spec, const QuadratureConfig& cfg, bool with_z) {
  const auto& g = spec.geometry;
  GuidedRules r;
  r.x = map_to_interval(gauss_legendre(resolve_nodes(cfg.nodes_x, spec.index, "x")), 0.0, g.a);
  r.y = map_to_interval(gauss_legendre(resolve_nodes(cfg.nodes_y, spec.index, "y")), 0.0, g.b);
  if (with_z) {
    if (cfg.nodes_z < 1) throw ResolutionError("quadrature along z needs >= 1 node", 2);
    r.z = map_to_interval(gauss_legendre(cfg.nodes_z), 0.0, g.L);
  } else {
    r.z = QuadratureRule{{0.0}, {1.0}};
  }
  return r;
}

template <std::size_t K, class F>
kernels::Values<K> integrate3(const GuidedRules& r, bool parallel, F&& f) {
  return parallel ? kernels::tensor_quadrature<K>(r.x, r.y, r.z, f)
                  : kernels::tensor_quadrature_serial<K>(r.x, r.y, r.z, f);
}

void require_real_kz(const GuidedModeParams& p) {
  if (p.k_z.imag() != 0.0) {
    throw DomainError("mode is evanescent (omega < omega_c); totals need a propagating mode");
  }
}

// Transverse and longitudinal squared magnitude of the spin-carrying field.
std::pair<double, double> split_spin_field(const GuidedModeSpec& spec, const FieldPhasor& f,
                                           bool magnetic) {
  const double c2 = spec.constants.c * spec.constants.c;
  const CVec3& v = magnetic ? f.B : f.E;
  const double scale = magnetic ? c2 : 1.0;
  return {scale * (std::norm(v.x()) + std::norm(v.y())), scale * std::norm(v.z())};
}

}  // namespace

int minimum_nodes(const ModeIndex& index) { return 2 * (index.m + index.n) + 2; }

int default_nodes(const ModeIndex& index) {
  return std::max(minimum_nodes(index), 12 * std::max(index.m, index.n) + 16);
}

double degeneracy_factor(const ModeIndex& index) {
  return (index.m == 0 || index.n == 0) ? 2.0 : 1.0;
}

GuidedClosedForms guided_closed_forms(const GuidedModeSpec& spec, bool apply_degeneracy_factor) {
  const GuidedModeParams p = guided_params(spec);
  require_real_kz(p);
  const auto& k = spec.constants;
  const double g = apply_degeneracy_factor ? degeneracy_factor(spec.index) : 1.0;
  const double Vh2 = spec.geometry.volume() * spec.amplitude_h * spec.amplitude_h;
  const double w = spec.omega, wc = p.omega_c, kz = p.k_z.real();
  return {g * k.eps0 * w * w * Vh2 / (8.0 * wc * wc),
          g * k.eps0 * w * kz * Vh2 / (8.0 * wc * wc),
          g * k.eps0 * k.c * kz * Vh2 / (4.0 * wc * w)};
}

GuidedObservables integrate_guided(const GuidedModeSpec& spec, const QuadratureConfig& cfg) {
  const GuidedModeParams p = guided_params(spec);
  require_real_kz(p);
  const GuidedRules rules = guided_rules(spec, cfg, true);
  const auto& k = spec.constants;
  const bool magnetic = spec.index.family == Family::TE;

  // w, p_z, |s_perp|^2, u_T, u_L, Re(E.E* - c^2 B.B*)
  const auto totals = integrate3<6>(rules, cfg.parallel, [&](double x, double y, double z) {
    const FieldPhasor f = guided_field_phasor(spec, {x, y, z}, 0.0);
    const Vec3 s = combine(spin_densities(f, spec.omega, k), SpinCombination::Sum);
    const auto [tr, lo] = split_spin_field(spec, f, magnetic);
    return kernels::Values<6>{energy_density(f, k),
                              momentum_density(f, k).z(),
                              s.x() * s.x() + s.y() * s.y(),
                              0.25 * k.eps0 * tr,
                              0.25 * k.eps0 * lo,
                              f.E.squaredNorm() - k.c * k.c * f.B.squaredNorm()};
  });

  GuidedObservables o;
  o.W = totals[0];
  o.P_z = totals[1];
  o.U_transverse = totals[3];
  o.U_longitudinal = totals[4];
  o.S_perp_rms = std::sqrt(spec.geometry.volume() * totals[2]);
  o.balance = 0.25 * k.eps0 * totals[5];
  const double dir = p.k_z.real() < 0.0 ? -1.0 : 1.0;
  o.S_perp = dir * (4.0 / spec.omega) * std::sqrt(o.U_transverse * o.U_longitudinal);
  o.v = energy_velocity(o.W, o.P_z, k.c);
  o.theta = std::atan2(std::sqrt(o.U_longitudinal), std::sqrt(o.U_transverse));
  o.e = o.U_transverse > 0.0 ? std::sqrt(o.U_longitudinal / o.U_transverse)
                             : std::numeric_limits<double>::infinity();
  o.n_quanta = o.W / (k.hbar * spec.omega);
  o.n_quanta_integer = as_integer_quanta(o.n_quanta);
  return o;
}

double energy_velocity(double W, double P_z, double c) {
  if (!(W > 0.0)) throw DomainError("energy_velocity needs W > 0");
  return P_z * c * c / W;
}

double amplitude_for_quanta(int n, const GuidedModeSpec& spec) {
  if (n < 1) throw DomainError("amplitude_for_quanta needs n >= 1");
  const GuidedModeParams p = guided_params(spec);
  if (!p.propagating) throw DomainError("no quanta below cutoff; give the amplitude instead");
  const auto& k = spec.constants;
  const double w = spec.omega;
  const double g = degeneracy_factor(spec.index);
  return std::sqrt(8.0 * p.omega_c * p.omega_c * n * k.hbar * w /
                   (g * k.eps0 * w * w * spec.geometry.volume()));
}

double amplitude_for_quanta(int n, const SurfaceWaveSpec& spec) {
  if (n < 1) throw DomainError("amplitude_for_quanta needs n >= 1");
  const SurfaceWaveParams p = surface_params(spec);
  const auto& k = spec.constants;
  const double w = spec.omega;
  return std::sqrt(4.0 * p.kappa * w * w * n * k.hbar * w /
                   (p.k_z * p.k_z * k.c * k.c * k.eps0 * spec.area_A));
}

GuidedModeSpec with_quanta(GuidedModeSpec spec, int n) {
  spec.amplitude_h = amplitude_for_quanta(n, spec);
  return spec;
}

SurfaceWaveSpec with_quanta(SurfaceWaveSpec spec, int n) {
  spec.amplitude_hp = amplitude_for_quanta(n, spec);
  return spec;
}

double quantized_transverse_spin_guided(int n, const GuidedModeSpec& spec) {
  const GuidedModeParams p = guided_params(spec);
  require_real_kz(p);
  const double c = spec.constants.c;
  const double beta = p.k_z.real() * c / spec.omega;  // v / c
  return 2.0 * n * spec.constants.hbar * beta * std::sqrt((1.0 - beta) * (1.0 + beta));
}

namespace {

Ellipticity cross_section_ellipticity(const GuidedModeSpec& spec, const QuadratureConfig& cfg,
                                      bool magnetic) {
  const GuidedModeParams p = guided_params(spec);
  require_real_kz(p);
  const GuidedRules rules = guided_rules(spec, cfg, false);
  const auto sums = integrate3<2>(rules, cfg.parallel, [&](double x, double y, double) {
    const FieldPhasor f = guided_field_phasor(spec, {x, y, 0.0}, 0.0);
    const auto [tr, lo] = split_spin_field(spec, f, magnetic);
    return kernels::Values<2>{tr, lo};
  });
  const double area = spec.geometry.a * spec.geometry.b;
  Ellipticity el;
  el.h_perp = std::sqrt(sums[0] / area);
  el.h_long = std::sqrt(sums[1] / area);
  el.e = el.h_perp > 0.0 ? el.h_long / el.h_perp : std::numeric_limits<double>::infinity();
  el.theta = std::atan2(el.h_long, el.h_perp);
  el.extrapolated = magnetic;
  return el;
}

}  // namespace

Ellipticity ellipticity_guided(const GuidedModeSpec& spec, const QuadratureConfig& cfg) {
  if (spec.index.family == Family::TE) {
    throw UnsupportedDerivationError(
        "guided ellipticity is derived for TM modes; the TE electric ellipse is degenerate "
        "(E_z = 0). Use ellipticity_guided_magnetic for the extrapolated TE value");
  }
  return cross_section_ellipticity(spec, cfg, false);
}

Ellipticity ellipticity_guided_magnetic(const GuidedModeSpec& spec, const QuadratureConfig& cfg) {
  return cross_section_ellipticity(spec, cfg, true);
}

double balance_integral(const GuidedModeSpec& spec, const QuadratureConfig& cfg) {
  return balance_integral(
      spec, [&spec](const Point3& pt) { return guided_field_phasor(spec, pt, 0.0); }, cfg);
}

double balance_integral(const GuidedModeSpec& spec, const FieldEvaluator& field,
                        const QuadratureConfig& cfg) {
  const GuidedRules rules = guided_rules(spec, cfg, true);
  const auto& k = spec.constants;
  const auto r = integrate3<1>(rules, cfg.parallel, [&](double x, double y, double z) {
    const FieldPhasor f = field({x, y, z});
    return kernels::Values<1>{f.E.squaredNorm() - k.c * k.c * f.B.squaredNorm()};
  });
  return 0.25 * k.eps0 * r[0];
}

SurfaceClosedForms surface_closed_forms(const SurfaceWaveSpec& spec) {
  const SurfaceWaveParams p = surface_params(spec);
  const auto& k = spec.constants;
  const double w = spec.omega;
  const double Ah2 = spec.area_A * spec.amplitude_hp * spec.amplitude_hp;
  return {p.k_z * p.k_z * k.c * k.c * k.eps0 * Ah2 / (4.0 * p.kappa * w * w),
          p.k_z * k.eps0 * Ah2 / (4.0 * p.kappa * w),
          p.k_z * k.c * k.c * k.eps0 * Ah2 / (2.0 * w * w * w)};
}

SurfaceObservables integrate_surface(const SurfaceWaveSpec& spec, const QuadratureConfig& cfg,
                                     SpinCombination combination) {
  const SurfaceWaveParams p = surface_params(spec);
  const double tail = std::exp(-2.0 * cfg.surface_depth);
  if (!(tail <= 1e-12)) {
    throw ResolutionError("surface truncation depth of " + std::to_string(cfg.surface_depth) +
                              " decay lengths leaves a relative tail of " + std::to_string(tail),
                          20);
  }
  const auto& k = spec.constants;
  const QuadratureRule rule = composite_gauss_legendre(
      cfg.surface_nodes_per_panel, cfg.surface_panels, 0.0, cfg.surface_depth / p.kappa);
  auto integrand = [&](double x) {
    const FieldPhasor f = surface_field_phasor(spec, {x, 0.0, 0.0}, 0.0);
    const Vec3 s = combine(spin_densities(f, spec.omega, k), combination);
    return kernels::Values<3>{energy_density(f, k), momentum_density(f, k).z(), s.y()};
  };
  const auto r = cfg.parallel ? kernels::line_quadrature<3>(rule, integrand)
                              : kernels::line_quadrature_serial<3>(rule, integrand);

  SurfaceObservables o;
  o.W = spec.area_A * r[0];
  o.P_z = spec.area_A * r[1];
  o.S_y = spec.area_A * r[2];
  o.v = energy_velocity(o.W, o.P_z, k.c);
  o.theta_prime = std::atan(p.kappa / p.k_z);
  o.e = p.kappa / std::abs(p.k_z);
  o.n_quanta = o.W / (k.hbar * spec.omega);
  o.n_quanta_integer = as_integer_quanta(o.n_quanta);
  o.truncation_tail = tail;
  return o;
}

double quantized_transverse_spin_surface(int n, const SurfaceWaveSpec& spec,
                                         SpinCombination combination) {
  if (n < 0) throw DomainError("photon number must be non-negative");
  const SurfaceWaveParams p = surface_params(spec);
  const double full = 2.0 * n * spec.constants.hbar * p.kappa / p.k_z;
  return combination == SpinCombination::Sum ? full : 0.5 * full;
}

double ellipticity_surface(const SurfaceWaveSpec& spec) {
  const FieldPhasor f = surface_field_phasor(spec, {0.0, 0.0, 0.0}, 0.0);
  if (spec.family == Family::TM) return std::abs(f.E.z() / f.E.x());
  return std::abs(f.B.z() / f.B.x());
}

std::optional<long> as_integer_quanta(double n_quanta) {
  const double r = std::round(n_quanta);
  if (std::isfinite(r) && std::abs(n_quanta - r) <= 1e-6) return static_cast<long>(r);
  return std::nullopt;
}

}  // namespace transpin
