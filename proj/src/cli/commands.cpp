#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "transpin/cli.hpp"
#include "transpin/effective_mass.hpp"
#include "transpin/errors.hpp"
#include "transpin/kernels.hpp"
#include "transpin/observables.hpp"
#include "transpin/spin_algebra.hpp"

namespace transpin::cli {

namespace {

double rel_diff(double actual, double expected) {
  const double scale = std::abs(expected);
  return scale > 0.0 ? std::abs(actual - expected) / scale : std::abs(actual);
}

json optional_integer(const std::optional<long>& v) {
  return v ? json(*v) : json(nullptr);
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

std::string direction_label(Direction d) { return d == Direction::Forward ? "+z" : "-z"; }

std::string units_label(UnitSystem u) { return u == UnitSystem::SI ? "SI" : "natural"; }

json guided_report(const RunConfig& cfg) {
  const GuidedModeSpec& spec = cfg.guided;
  const GuidedModeParams p = guided_params(spec);
  const auto& k = spec.constants;

  json out;
  out["mode"] = "guided";
  out["units"] = units_label(cfg.units);
  out["spec"] = {
      {"geometry", {{"a", spec.geometry.a}, {"b", spec.geometry.b}, {"L", spec.geometry.L}}},
      {"index",
       {{"family", std::string(to_string(spec.index.family))},
        {"m", spec.index.m},
        {"n", spec.index.n}}},
      {"omega", spec.omega},
      {"amplitude_h", spec.amplitude_h},
      {"direction", direction_label(spec.direction)},
  };
  out["cutoff_frequency"] = p.omega_c;
  out["omega_over_cutoff"] = spec.omega / p.omega_c;
  out["k_z"] = complex_json(p.k_z);
  out["propagating"] = p.propagating;

  const GuidedMassReport mass = guided_mass_report(spec);
  out["mass"] = {
      {"m0", mass.m0},
      {"M0", mass.M0},
      {"epsilon", mass.epsilon},
      {"p", mass.p},
      {"v_g", mass.v_g},
      {"v_p", std::isfinite(mass.v_p) ? json(mass.v_p) : json(nullptr)},
      {"relativistic_identities_apply", mass.relativistic_identities_apply},
  };
  out["dispersion_residual"] = dispersion_residual_for(spec, p.k_z);

  if (p.k_z.imag() != 0.0) return out;

  const GuidedObservables obs = integrate_guided(spec);
  out["observables"] = {
      {"W", obs.W},
      {"P_z", obs.P_z},
      {"S_perp", obs.S_perp},
      {"v", obs.v},
      {"theta", obs.theta},
      {"e", obs.e},
      {"n_quanta", obs.n_quanta},
      {"n_quanta_integer", optional_integer(obs.n_quanta_integer)},
      {"U_transverse", obs.U_transverse},
      {"U_longitudinal", obs.U_longitudinal},
      {"S_perp_rms", obs.S_perp_rms},
      {"balance", obs.balance},
  };
  const GuidedClosedForms cf = guided_closed_forms(spec);
  out["degeneracy_factor"] = degeneracy_factor(spec.index);
  out["closed_forms"] = {{"W", cf.W}, {"P_z", cf.P_z}, {"S_perp", cf.S_perp}};
  out["closed_form_residuals"] = {
      {"W", rel_diff(obs.W, cf.W)},
      {"P_z", rel_diff(obs.P_z, cf.P_z)},
      {"S_perp", rel_diff(obs.S_perp, cf.S_perp)},
  };
  out["S_perp_over_hbar"] = obs.S_perp / k.hbar;
  // n sin(2 theta), signed by the propagation direction
  out["quantized_S_perp_over_hbar"] = obs.n_quanta * sign_of(spec.direction) *
                                      std::sin(2.0 * obs.theta);

  const Ellipticity ell = spec.index.family == Family::TM
                              ? ellipticity_guided(spec)
                              : ellipticity_guided_magnetic(spec);
  out["ellipticity"] = {
      {"field", spec.index.family == Family::TM ? "E" : "B"},
      {"e", ell.e},
      {"theta", ell.theta},
      {"h_perp", ell.h_perp},
      {"h_long", ell.h_long},
      {"extrapolated", ell.extrapolated},
  };

  const GuidedMassResiduals mr = guided_mass_residuals(mass, k.c);
  out["mass"]["W"] = mass.W;
  out["mass"]["P_z"] = mass.P_z;
  out["mass"]["n_quanta"] = mass.n_quanta;
  out["mass_residuals"] = {
      {"energy_momentum", mr.energy_momentum},
      {"velocity_product", mr.velocity_product},
      {"photon_energy", mr.photon_energy},
      {"total_energy", mr.total_energy},
      {"total_mass", mr.total_mass},
  };
  const DispersionResidual dr = dispersion_residual(spec);
  out["dispersion_residual"] = dr.algebraic;
  out["klein_gordon_stencil_residual"] = dr.stencil;
  return out;
}

json surface_report(const RunConfig& cfg) {
  const SurfaceWaveSpec& spec = cfg.surface;
  const SurfaceWaveParams p = surface_params(spec);
  const auto& k = spec.constants;
  const bool average = cfg.combination == SpinCombination::Average;

  json out;
  out["mode"] = "surface";
  out["units"] = units_label(cfg.units);
  out["combination"] = average ? "average" : "sum";
  out["spec"] = {
      {"family", std::string(to_string(spec.family))},
      {"eta", spec.eta},
      {"phi", spec.phi},
      {"omega", spec.omega},
      {"amplitude_hp", spec.amplitude_hp},
      {"area_A", spec.area_A},
      {"direction", direction_label(spec.direction)},
  };
  out["kappa"] = p.kappa;
  out["k_z"] = p.k_z;
  out["tan_theta_prime"] = p.kappa / p.k_z;

  const SurfaceObservables obs = integrate_surface(spec, {}, cfg.combination);
  out["observables"] = {
      {"W", obs.W},
      {"P_z", obs.P_z},
      {"S_y", obs.S_y},
      {"v", obs.v},
      {"theta_prime", obs.theta_prime},
      {"e", obs.e},
      {"n_quanta", obs.n_quanta},
      {"n_quanta_integer", optional_integer(obs.n_quanta_integer)},
      {"truncation_tail", obs.truncation_tail},
  };
  SurfaceClosedForms cf = surface_closed_forms(spec);
  if (average) cf.S_y *= 0.5;
  out["closed_forms"] = {{"W", cf.W}, {"P_z", cf.P_z}, {"S_y", cf.S_y}};
  out["closed_form_residuals"] = {
      {"W", rel_diff(obs.W, cf.W)},
      {"P_z", rel_diff(obs.P_z, cf.P_z)},
      {"S_y", rel_diff(obs.S_y, cf.S_y)},
  };
  out["S_y_over_hbar"] = obs.S_y / k.hbar;
  out["quantized_S_y_over_hbar"] = (average ? 1.0 : 2.0) * obs.n_quanta * p.kappa / p.k_z;
  // Momentum per quantum: hbar w^2 / (kz c^2) against the guided-style hbar kz.
  out["P_z_over_n_hbar_omega2_over_kz_c2"] =
      obs.P_z / (obs.n_quanta * k.hbar * spec.omega * spec.omega / (p.k_z * k.c * k.c));
  out["P_z_over_n_hbar_kz"] = obs.P_z / (obs.n_quanta * k.hbar * p.k_z);
  out["ellipticity"] = ellipticity_surface(spec);

  const SurfaceMassReport mass = surface_mass_report(spec);
  out["mass"] = {
      {"rho0_surface", mass.rho0_surface},
      {"M_s", mass.M_s},
      {"M_s_quadrature", mass.M_s_quadrature},
      {"m_s", mass.m_s},
      {"epsilon", mass.epsilon},
      {"p", mass.p},
      {"v", mass.v},
  };
  const SurfaceMassResiduals mr = surface_mass_residuals(mass, k.c);
  out["mass_residuals"] = {
      {"total_energy", mr.total_energy},
      {"total_momentum", mr.total_momentum},
      {"energy_momentum", mr.energy_momentum},
      {"total_mass", mr.total_mass},
      {"quadrature_mass", mr.quadrature_mass},
      {"pointwise_at_surface", surface_pointwise_mass_residual(spec, 0.0)},
  };
  return out;
}

}  // namespace

std::vector<SpinMapRow> spin_map(const RunConfig& cfg, bool parallel) {
  const int nx = cfg.nx;
  const int ny = cfg.ny;
  if (nx < 2 || ny < 2) throw ConfigError("config key 'grid': nx and ny must be at least 2");

  double x_max = 0.0;
  double y_max = 0.0;
  std::function<SpinDensityPair(double, double)> density;
  if (cfg.kind == ModeKind::Guided) {
    const GuidedModeSpec& spec = cfg.guided;
    x_max = spec.geometry.a;
    y_max = spec.geometry.b;
    density = [&spec](double x, double y) { return analytic_spin_guided(spec, {x, y, 0.0}); };
  } else {
    const SurfaceWaveSpec& spec = cfg.surface;
    x_max = y_max = 5.0 / surface_params(spec).kappa;
    density = [&spec](double x, double) { return analytic_spin_surface(spec, x); };
  }

  auto sample = [&](int i, int j) {
    SpinMapRow row;
    row.x = x_max * i / (nx - 1);
    row.y = y_max * j / (ny - 1);
    row.s = combine(density(row.x, row.y), cfg.combination);
    row.magnitude = row.s.norm();
    return row;
  };
  return parallel ? kernels::evaluate_grid<SpinMapRow>(nx, ny, sample)
                  : kernels::evaluate_grid_serial<SpinMapRow>(nx, ny, sample);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

std::string spin_map_csv(const std::vector<SpinMapRow>& rows) {
  std::string out = "x,y,sx,sy,sz,mag\n";
  out.reserve(rows.size() * 96);
  for (const auto& r : rows) {
    for (double v : {r.x, r.y, r.s.x(), r.s.y(), r.s.z()}) {
      out += format_double(v);
      out += ',';
    }
    out += format_double(r.magnitude);
    out += '\n';
  }
  return out;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    if (!out) throw IoError("cannot write to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << content;
  file.close();
  if (!file) throw IoError("error while writing '" + path + "'");
}

json report_json(const RunConfig& cfg) {
  return cfg.kind == ModeKind::Guided ? guided_report(cfg) : surface_report(cfg);
}

json commutator_table_json() {
  const SpinMatrixSet& m = spin_matrices();
  const SpinTensorBasis basis = spin_tensor_basis(m);
  json entries = json::array();
  for (const auto& e : commutator_table(basis)) {
    json terms = json::array();
    for (const auto& [label, c] : e.terms) {
      terms.push_back({{"basis", label}, {"re", c.real()}, {"im", c.imag()}});
    }
    entries.push_back({{"a", e.a}, {"b", e.b}, {"terms", terms}});
  }
  json labels = json::array();
  for (const auto& l : spin_tensor_labels()) labels.push_back(l);
  return {
      {"basis", labels},
      {"commutators", entries},
      {"closure_rank", closure_rank(basis)},
  };
}

}  // namespace transpin::cli
