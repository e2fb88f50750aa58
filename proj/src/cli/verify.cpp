#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "transpin/cli.hpp"
#include "transpin/effective_mass.hpp"
#include "transpin/errors.hpp"
#include "transpin/observables.hpp"
#include "transpin/spin_algebra.hpp"

namespace transpin::cli {

namespace {

#ifdef TRANSPIN_INJECT_FAULT
// Test-only build: skews one quadrature total so the suite must fail.
constexpr double kInjectedSkew = 1.0 + 1e-6;
#else
constexpr double kInjectedSkew = 1.0;
#endif

const double kSqrt2 = std::sqrt(2.0);

CheckResult within_abs(std::string name, double residual, double tol) {
  return {std::move(name), 0.0, residual, tol, std::abs(residual) <= tol};
}

CheckResult within_rel(std::string name, double actual, double expected, double tol) {
  const double scale = std::abs(expected);
  const double err = std::abs(actual - expected);
  const bool ok = scale > 0.0 ? err <= tol * scale : err <= tol;
  return {std::move(name), expected, actual, tol, ok};
}

struct GuidedCase {
  std::string label;
  Family family;
  int m;
  int n;
};

const std::vector<GuidedCase>& guided_cases() {
  static const std::vector<GuidedCase> cases{
      {"TM11", Family::TM, 1, 1}, {"TM21", Family::TM, 2, 1}, {"TM22", Family::TM, 2, 2},
      {"TE10", Family::TE, 1, 0}, {"TE11", Family::TE, 1, 1}, {"TE21", Family::TE, 2, 1},
  };
  return cases;
}

struct Ratio {
  std::string label;
  double value;
};

const std::vector<Ratio>& ratios() {
  static const std::vector<Ratio> r{{"1.1", 1.1}, {"sqrt2", kSqrt2}, {"2", 2.0}};
  return r;
}

GuidedModeSpec guided_spec(const GuidedCase& c, double ratio, int quanta = 1,
                           Direction dir = Direction::Forward) {
  GuidedModeSpec s;
  s.geometry = {2.29e-2, 1.02e-2, 5.0e-2};
  s.index = {c.family, c.m, c.n};
  s.omega = ratio * cutoff_frequency(s.geometry, s.index, s.constants);
  s.direction = dir;
  if (ratio < 1.0) {
    s.amplitude_h = 150.0;  // no quanta below cutoff
    return s;
  }
  return with_quanta(s, quanta);
}

struct SurfaceCase {
  std::string label;
  Family family;
  double eta;
  double phi_deg;
};

const std::vector<SurfaceCase>& surface_cases() {
  static const std::vector<SurfaceCase> cases = [] {
    std::vector<SurfaceCase> out;
    for (Family f : {Family::TM, Family::TE}) {
      for (double eta : {1.45, 2.0}) {
        for (double phi : {50.0, 70.0}) {
          std::ostringstream label;
          label << to_string(f) << "/eta=" << eta << "/phi=" << phi;
          out.push_back({label.str(), f, eta, phi});
        }
      }
    }
    return out;
  }();
  return cases;
}

SurfaceWaveSpec surface_spec(const SurfaceCase& c, int quanta = 1,
                             Direction dir = Direction::Forward) {
  SurfaceWaveSpec s;
  s.family = c.family;
  s.eta = c.eta;
  s.phi = c.phi_deg * kPi / 180.0;
  s.omega = 2.0 * kPi * s.constants.c / 633e-9;
  s.area_A = 1e-12;
  s.direction = dir;
  return with_quanta(s, quanta);
}

std::vector<Point3> interior_points(const WaveguideGeometry& g, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  std::vector<Point3> pts;
  for (int i = 0; i < count; ++i) pts.push_back({u(rng) * g.a, u(rng) * g.b, u(rng) * g.L});
  return pts;
}

double max_abs(const Vec3& v) { return v.cwiseAbs().maxCoeff(); }

// Max over points of |time average - phasor formula|, spin normalized by the
// local density scale, energy by the energy density.
template <class Phasor>
double oracle_residual(Phasor&& phasor_at, double omega, const PhysicalConstants& k,
                       const std::vector<Point3>& pts) {
  double worst = 0.0;
  for (const Point3& p : pts) {
    const FieldPhasor f0 = phasor_at(p, 0.0);
    struct Sample {
      Vec3 se, sm;
      double w;
      Sample operator+(const Sample& o) const { return {se + o.se, sm + o.sm, w + o.w}; }
      Sample operator/(double d) const { return {se / d, sm / d, w / d}; }
    };
    const Sample avg = time_average_oracle(
        [&](double t) {
          const RealFields r = instantaneous(phasor_at(p, t), omega, k);
          const SpinDensityPair s = instantaneous_spin(r, k);
          return Sample{s.s_e, s.s_m, instantaneous_energy(r, k)};
        },
        omega, 64);
    const SpinDensityPair ref = spin_densities(f0, omega, k);
    const double w = energy_density(f0, k);
    const double scale = local_density_scale(f0, omega, k);
    worst = std::max({worst, max_abs(avg.se - ref.s_e) / scale, max_abs(avg.sm - ref.s_m) / scale,
                      std::abs(avg.w - w) / w});
  }
  return worst;
}

// ---- guided suite ----------------------------------------------------------

std::vector<CheckResult> guided_closed_form(const GuidedCase& c, const Ratio& r) {
  const GuidedModeSpec spec = guided_spec(c, r.value);
  const GuidedObservables obs = integrate_guided(spec);
  const GuidedClosedForms cf = guided_closed_forms(spec);
  const std::string base = "guided/closed-form/" + c.label + "/w=" + r.label;
  return {
      within_rel(base + "/W", obs.W * kInjectedSkew, cf.W, 1e-9),
      within_rel(base + "/P_z", obs.P_z, cf.P_z, 1e-9),
      within_rel(base + "/S_perp", obs.S_perp, cf.S_perp, 1e-9),
      within_abs("guided/balance/" + c.label + "/w=" + r.label, obs.balance / obs.W, 1e-12),
  };
}

std::vector<CheckResult> guided_quantization(const GuidedCase& c, const Ratio& r) {
  std::vector<CheckResult> out;
  for (int n : {1, 2, 5}) {
    const GuidedModeSpec spec = guided_spec(c, r.value, n);
    const GuidedObservables obs = integrate_guided(spec);
    const std::string base =
        "guided/quantization/" + c.label + "/w=" + r.label + "/n=" + std::to_string(n);
    const double hbar = spec.constants.hbar;
    out.push_back(within_rel(base + "/W", obs.W, n * hbar * spec.omega, 1e-9));
    out.push_back(
        within_rel(base + "/S_perp", obs.S_perp, quantized_transverse_spin_guided(n, spec), 1e-9));
    if (r.label == "sqrt2") {
      out.push_back(within_rel(base + "/S_perp_peak", obs.S_perp / hbar, n, 1e-9));
    }
  }
  return out;
}

std::vector<CheckResult> guided_pointwise(const GuidedCase& c) {
  const GuidedModeSpec spec = guided_spec(c, 1.5);
  const GuidedModeSpec back = guided_spec(c, 1.5, 1, Direction::Backward);
  const GuidedModeSpec evan = guided_spec(c, 0.8);
  const auto& k = spec.constants;
  const auto pts = interior_points(spec.geometry, 16, 7u + static_cast<unsigned>(c.m * 10 + c.n));

  double pipeline = 0.0, zeros = 0.0, evanescent = 0.0, locking = 0.0;
  for (const Point3& p : pts) {
    const FieldPhasor f = guided_field_phasor(spec, p, 0.0);
    const double scale = local_density_scale(f, spec.omega, k);
    const SpinDensityPair s = spin_densities(f, spec.omega, k);
    const SpinDensityPair a = analytic_spin_guided(spec, p);
    pipeline = std::max({pipeline, max_abs(s.s_e - a.s_e) / scale, max_abs(s.s_m - a.s_m) / scale});
    const Vec3& idle = c.family == Family::TM ? s.s_m : s.s_e;
    const Vec3& active = c.family == Family::TM ? s.s_e : s.s_m;
    zeros = std::max({zeros, max_abs(idle) / scale, std::abs(active.z()) / scale});

    const FieldPhasor fe = guided_field_phasor(evan, p, 0.0);
    const double escale = local_density_scale(fe, evan.omega, k);
    const SpinDensityPair se = spin_densities(fe, evan.omega, k);
    evanescent = std::max({evanescent, max_abs(se.s_e) / escale, max_abs(se.s_m) / escale});

    const SpinDensityPair sb = spin_densities(guided_field_phasor(back, p, 0.0), back.omega, k);
    const SpinDensityPair ab = analytic_spin_guided(back, p);
    for (int i = 0; i < 3; ++i) {
      for (auto [fwd, bwd] : {std::pair{s.s_e[i], sb.s_e[i]}, std::pair{s.s_m[i], sb.s_m[i]},
                              std::pair{a.s_e[i], ab.s_e[i]}, std::pair{a.s_m[i], ab.s_m[i]}}) {
        const double mag = std::max(std::abs(fwd), std::abs(bwd));
        if (mag > 0.0) locking = std::max(locking, std::abs(fwd + bwd) / mag);
      }
    }
  }
  const std::string l = c.label;
  return {
      within_abs("guided/pipeline-vs-analytic/" + l, pipeline, 1e-12),
      within_abs("guided/structural-zeros/" + l, zeros, 1e-15),
      within_abs("guided/structural-zeros/" + l + "/evanescent", evanescent, 1e-15),
      within_abs("guided/locking/" + l, locking, 1e-15),
      within_abs("guided/oracle/" + l,
                 oracle_residual([&](const Point3& p, double t) { return guided_field_phasor(spec, p, t); },
                                 spec.omega, k, interior_points(spec.geometry, 8, 99u)),
                 1e-10),
  };
}

std::vector<CheckResult> guided_derived(const GuidedCase& c) {
  std::vector<CheckResult> out;
  const std::string l = c.label;
  for (const Ratio& r : ratios()) {
    const GuidedModeSpec spec = guided_spec(c, r.value, 3);
    const double cc = spec.constants.c;
    const GuidedModeParams p = guided_params(spec);
    const double kz = p.k_z.real();
    const std::string tag = l + "/w=" + r.label;

    const GuidedMassReport mass = guided_mass_report(spec);
    const GuidedMassResiduals mr = guided_mass_residuals(mass, cc);
    out.push_back(within_abs("guided/mass/" + tag,
                             std::max({mr.energy_momentum, mr.velocity_product, mr.photon_energy,
                                       mr.total_energy, mr.total_mass}),
                             1e-12));
    const DispersionResidual dr = dispersion_residual(spec);
    out.push_back(within_abs("guided/dispersion/" + tag, dr.algebraic, 1e-12));
    out.push_back(within_abs("guided/klein-gordon-stencil/" + tag, dr.stencil, 1e-8));

    const FourMomentumSplit split = four_momentum_split(spec);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double phase = 0.0;
    for (int i = 0; i < 100; ++i) {
      const FourVector x{cc * u(rng) * 1e-9, u(rng) * spec.geometry.a, u(rng) * spec.geometry.b,
                         u(rng) * spec.geometry.L};
      const PhaseIdentity id = phase_identity(split, x);
      phase = std::max(phase, std::abs(id.full - id.split) / id.scale);
    }
    out.push_back(within_abs("guided/phase-split/" + tag, phase, 1e-12));

    const GuidedObservables obs = integrate_guided(spec);
    out.push_back(within_rel("guided/energy-velocity/" + tag, obs.v, kz * cc * cc / spec.omega, 1e-12));
    out.push_back(within_rel("guided/theta/" + tag, obs.theta, std::acos(kz * cc / spec.omega), 1e-9));
    const Ellipticity e = c.family == Family::TM ? ellipticity_guided(spec)
                                                 : ellipticity_guided_magnetic(spec);
    out.push_back(within_rel("guided/ellipticity/" + tag, e.e, p.omega_c / (kz * cc), 1e-9));
  }
  return out;
}

RunConfig figure_config(Family f, int m, int n, int nx, int ny) {
  RunConfig cfg;
  cfg.kind = ModeKind::Guided;
  cfg.units = UnitSystem::Natural;
  cfg.nx = nx;
  cfg.ny = ny;
  GuidedModeSpec& s = cfg.guided;
  s.constants = PhysicalConstants::natural();
  s.geometry = {1.0, 1.0, 1.0};
  s.index = {f, m, n};
  const GuidedModeParams p0 = [&] {
    s.omega = 2.0 * cutoff_frequency(s.geometry, s.index, s.constants);
    return guided_params(s);
  }();
  s.amplitude_h = std::sqrt(2.0 * s.constants.mu0 * p0.omega_c * p0.omega_c * s.omega /
                            (kPi * p0.k_z.real()));
  cfg.paper_figures = true;
  return cfg;
}

std::vector<CheckResult> guided_figures() {
  std::vector<CheckResult> out;
  {
    const auto rows = spin_map(figure_config(Family::TE, 1, 0, 41, 11));
    double peak = 0.0;
    for (const auto& r : rows) peak = std::max(peak, r.magnitude);
    double zero_lines = 0.0, antisym = 0.0;
    for (int j = 0; j < 11; ++j) {
      for (int i : {0, 20, 40}) zero_lines = std::max(zero_lines, std::abs(rows[j * 41 + i].s.y()));
      for (int i = 0; i <= 20; ++i) {
        antisym = std::max(antisym, std::abs(rows[j * 41 + i].s.y() + rows[j * 41 + 40 - i].s.y()));
      }
    }
    const double left = rows[10].s.y(), right = rows[30].s.y();
    out.push_back(within_abs("guided/figure/TE10/zeros", zero_lines / peak, 1e-15));
    out.push_back(within_abs("guided/figure/TE10/antisymmetry", antisym / peak, 1e-15));
    out.push_back(within_rel("guided/figure/TE10/opposite-extrema", left, -right, 1e-15));
  }
  {
    const auto rows = spin_map(figure_config(Family::TM, 1, 1, 21, 21));
    double peak = 0.0;
    for (const auto& r : rows) peak = std::max(peak, r.magnitude);
    double worst = 0.0;
    for (int idx : {0, 20, 20 * 21, 20 * 21 + 20, 10 * 21 + 10}) {
      worst = std::max(worst, rows[idx].magnitude);
    }
    out.push_back(within_abs("guided/figure/TM11/center-and-corners", worst / peak, 1e-15));
  }
  for (Family f : {Family::TM, Family::TE}) {
    const auto fine = spin_map(figure_config(f, 2, 2, 21, 21));
    const auto base = spin_map(figure_config(f, 1, 1, 21, 21));
    double peak = 0.0, worst = 0.0;
    for (const auto& r : fine) peak = std::max(peak, r.magnitude);
    for (int j = 0; j < 21; ++j) {
      for (int i = 0; i < 21; ++i) {
        const Vec3 tiled = 2.0 * base[((2 * j) % 20) * 21 + (2 * i) % 20].s;
        worst = std::max(worst, max_abs(fine[j * 21 + i].s - tiled));
      }
    }
    out.push_back(within_abs("guided/figure/" + std::string(to_string(f)) + "22/tiling",
                             worst / peak, 1e-12));
  }
  return out;
}

// ---- surface suite ---------------------------------------------------------

std::vector<CheckResult> surface_totals(const SurfaceCase& c) {
  std::vector<CheckResult> out;
  const std::string l = c.label;
  {
    const SurfaceWaveSpec spec = surface_spec(c);
    const SurfaceObservables obs = integrate_surface(spec);
    const SurfaceClosedForms cf = surface_closed_forms(spec);
    out.push_back(within_rel("surface/closed-form/" + l + "/W", obs.W, cf.W, 1e-9));
    out.push_back(within_rel("surface/closed-form/" + l + "/P_z", obs.P_z, cf.P_z, 1e-9));
    out.push_back(within_rel("surface/closed-form/" + l + "/S_y", obs.S_y, cf.S_y, 1e-9));
    const SurfaceWaveParams p = surface_params(spec);
    const double cc = spec.constants.c;
    out.push_back(within_rel("surface/energy-velocity/" + l, obs.v, spec.omega / p.k_z, 1e-12));
    out.push_back(within_rel("surface/ellipticity/" + l, ellipticity_surface(spec), p.kappa / p.k_z,
                             1e-12));
    out.push_back(within_rel("surface/dispersion/" + l, p.k_z * p.k_z * cc * cc,
                             p.kappa * p.kappa * cc * cc + spec.omega * spec.omega, 1e-12));
  }
  for (int n : {1, 2, 5}) {
    const SurfaceWaveSpec spec = surface_spec(c, n);
    const SurfaceWaveParams p = surface_params(spec);
    const double hbar = spec.constants.hbar;
    const std::string base = "surface/quantization/" + l + "/n=" + std::to_string(n);
    const SurfaceObservables sum = integrate_surface(spec);
    const SurfaceObservables avg = integrate_surface(spec, {}, SpinCombination::Average);
    out.push_back(within_rel(base + "/W", sum.W, n * hbar * spec.omega, 1e-9));
    out.push_back(within_rel(base + "/S_y", sum.S_y, 2.0 * n * hbar * p.kappa / p.k_z, 1e-9));
    out.push_back(within_rel(base + "/S_y-average", avg.S_y, n * hbar * p.kappa / p.k_z, 1e-9));

    const SurfaceMassReport mass = surface_mass_report(spec);
    const SurfaceMassResiduals mr = surface_mass_residuals(mass, spec.constants.c);
    double pointwise = 0.0;
    for (double depth : {0.0, 0.3, 1.0, 2.5, 6.0}) {
      pointwise = std::max(pointwise, surface_pointwise_mass_residual(spec, depth / p.kappa));
    }
    out.push_back(within_abs("surface/mass/" + l + "/n=" + std::to_string(n),
                             std::max({mr.total_energy, mr.total_momentum, mr.energy_momentum,
                                       mr.total_mass, mr.quadrature_mass, pointwise}),
                             1e-12));
  }
  return out;
}

std::vector<CheckResult> surface_pointwise(const SurfaceCase& c) {
  const SurfaceWaveSpec spec = surface_spec(c);
  const SurfaceWaveSpec back = surface_spec(c, 1, Direction::Backward);
  const auto& k = spec.constants;
  const double kappa = surface_params(spec).kappa;
  std::vector<Point3> pts;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 12; ++i) pts.push_back({3.0 * u(rng) / kappa, u(rng) * 1e-6, u(rng) * 1e-6});

  double pipeline = 0.0, zeros = 0.0, locking = 0.0;
  for (const Point3& p : pts) {
    const FieldPhasor f = surface_field_phasor(spec, p, 0.0);
    const double scale = local_density_scale(f, spec.omega, k);
    const SpinDensityPair s = spin_densities(f, spec.omega, k);
    const SpinDensityPair a = analytic_spin_surface(spec, p.x);
    pipeline = std::max({pipeline, max_abs(s.s_e - a.s_e) / scale, max_abs(s.s_m - a.s_m) / scale});
    const Vec3& idle = c.family == Family::TM ? s.s_m : s.s_e;
    const Vec3& active = c.family == Family::TM ? s.s_e : s.s_m;
    zeros = std::max({zeros, max_abs(idle) / scale, std::abs(active.z()) / scale,
                      std::abs(active.x()) / scale});
    const SpinDensityPair sb = spin_densities(surface_field_phasor(back, p, 0.0), back.omega, k);
    const double fwd = active.y();
    const double bwd = c.family == Family::TM ? sb.s_e.y() : sb.s_m.y();
    locking = std::max(locking, std::abs(fwd + bwd) / std::max(std::abs(fwd), std::abs(bwd)));
  }
  const std::string l = c.label;
  return {
      within_abs("surface/pipeline-vs-analytic/" + l, pipeline, 1e-12),
      within_abs("surface/structural-zeros/" + l, zeros, 1e-15),
      within_abs("surface/locking/" + l, locking, 1e-15),
      within_abs("surface/oracle/" + l,
                 oracle_residual([&](const Point3& p, double t) { return surface_field_phasor(spec, p, t); },
                                 spec.omega, k, pts),
                 1e-10),
  };
}

// ---- algebra suite ---------------------------------------------------------

double commutator_defect(const std::array<Mat6c, 3>& a, const std::array<Mat6c, 3>& b,
                         const std::array<Mat6c, 3>& c) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Mat6c expect = Mat6c::Zero();
      for (int k = 0; k < 3; ++k) expect += cplx(0.0, levi_civita(i, j, k)) * c[k];
      worst = std::max(worst, (a[i] * b[j] - b[j] * a[i] - expect).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

// 1 - |<a, b>| for unit vectors: zero iff equal up to a global phase.
double phase_distance(const CVec3& a, const CVec3& b) { return 1.0 - std::abs(a.dot(b)); }

std::vector<CheckResult> algebra_matrices() {
  const SpinMatrixSet& m = spin_matrices();
  const cplx i{0.0, 1.0};
  std::array<Mat3c, 3> printed;
  printed[0] << 0, 0, 0, 0, 0, -i, 0, i, 0;
  printed[1] << 0, 0, i, 0, 0, 0, -i, 0, 0;
  printed[2] << 0, -i, 0, i, 0, 0, 0, 0, 0;

  double entries = 0.0, hermitian = 0.0, tau_comm = 0.0;
  Mat3c casimir3 = Mat3c::Zero();
  Mat6c casimir6 = Mat6c::Zero();
  for (int a = 0; a < 3; ++a) {
    entries = std::max(entries, (m.tau[a] - printed[a]).cwiseAbs().maxCoeff());
    hermitian = std::max(hermitian, (m.tau[a] - m.tau[a].adjoint()).cwiseAbs().maxCoeff());
    casimir3 += m.tau[a] * m.tau[a];
    casimir6 += m.Sigma[a] * m.Sigma[a];
    for (int b = 0; b < 3; ++b) {
      Mat3c expect = Mat3c::Zero();
      for (int c = 0; c < 3; ++c) expect += cplx(0.0, levi_civita(a, b, c)) * m.tau[c];
      tau_comm = std::max(tau_comm,
                          (m.tau[a] * m.tau[b] - m.tau[b] * m.tau[a] - expect).cwiseAbs().maxCoeff());
    }
  }
  double antisym = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      antisym = std::max(antisym, (m.S[mu][nu] + m.S[nu][mu]).cwiseAbs().maxCoeff());

  const Mat6c I6 = Mat6c::Identity();
  const SpinTensorBasis basis = spin_tensor_basis(m);
  const auto table = commutator_table(basis);
  const auto chiral = commutator_table(to_chiral_basis(basis, m.U));
  double table_diff = 0.0, table_residual = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    table_residual = std::max({table_residual, table[k].residual, chiral[k].residual});
    table_diff = std::max(table_diff, table[k].terms == chiral[k].terms ? 0.0 : 1.0);
  }

  return {
      within_abs("algebra/tau-entries", entries, 0.0),
      within_abs("algebra/tau-hermitian", hermitian, 0.0),
      within_abs("algebra/tau-commutators", tau_comm, 1e-15),
      within_abs("algebra/tau-casimir", (casimir3 - 2.0 * Mat3c::Identity()).cwiseAbs().maxCoeff(), 1e-15),
      within_abs("algebra/sigma-casimir", (casimir6 - 2.0 * I6).cwiseAbs().maxCoeff(), 1e-15),
      within_abs("algebra/sigma-sigma-commutators", commutator_defect(m.Sigma, m.Sigma, m.Sigma), 1e-15),
      within_abs("algebra/sigma-alpha-commutators", commutator_defect(m.Sigma, m.alpha, m.alpha), 1e-15),
      within_abs("algebra/alpha-alpha-commutators", commutator_defect(m.alpha, m.alpha, m.Sigma), 1e-15),
      within_abs("algebra/U-unitary", (m.U * m.U.adjoint() - I6).cwiseAbs().maxCoeff(), 1e-15),
      within_abs("algebra/U-involutive", (m.U * m.U - I6).cwiseAbs().maxCoeff(), 1e-15),
      within_abs("algebra/U-hermitian", (m.U - m.U.adjoint()).cwiseAbs().maxCoeff(), 0.0),
      within_abs("algebra/S-antisymmetric", antisym, 0.0),
      within_rel("algebra/closure-rank", closure_rank(basis), 6.0, 0.0),
      within_abs("algebra/commutator-expansion-residual", table_residual, 1e-13),
      within_abs("algebra/chiral-similarity-preserves-commutators", table_diff, 0.0),
  };
}

std::vector<CheckResult> algebra_helicity() {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> az(0.0, 2.0 * kPi);
  std::vector<Vec3> dirs;
  for (int i = 0; i < 1000; ++i) dirs.push_back(Vec3(g(rng), g(rng), g(rng)).normalized());
  for (double rho : {1e-7, 1e-8, 1e-9, 1e-12, 1e-15, 0.0}) {
    for (double sz : {1.0, -1.0}) {
      const double phi = az(rng);
      dirs.push_back(Vec3(rho * std::cos(phi), rho * std::sin(phi), sz * std::sqrt(1.0 - rho * rho)));
    }
  }
  double residual = 0.0, ortho = 0.0;
  for (const Vec3& n : dirs) {
    const HelicityEigensystem sys = helicity_eigensystem(n);
    const Mat3c proj = spin_projection(sys.direction);
    for (const auto& pair : sys.pairs) {
      residual = std::max(residual, (proj * pair.e - static_cast<double>(pair.lambda) * pair.e).norm());
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double target = a == b ? 1.0 : 0.0;
        ortho = std::max(ortho, std::abs(sys.pairs[a].e.dot(sys.pairs[b].e) - target));
      }
    }
  }

  const double r2 = 1.0 / kSqrt2;
  const cplx i{0.0, 1.0};
  double axes = 0.0;
  const struct {
    Vec3 n;
    CVec3 plus;
  } expected[] = {
      {Vec3::UnitZ(), CVec3(r2, i * r2, 0.0)},
      {Vec3::UnitX(), CVec3(0.0, i * r2, -r2)},
      {Vec3::UnitY(), CVec3(r2, 0.0, -i * r2)},
  };
  for (const auto& e : expected) {
    const HelicityEigensystem sys = helicity_eigensystem(e.n);
    axes = std::max({axes, phase_distance(sys.e(1), e.plus),
                     phase_distance(sys.e(-1), e.plus.conjugate()),
                     (sys.e(0) - e.n.cast<cplx>()).norm()});
  }

  double spinor = 0.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Vec6c v;
    for (int c = 0; c < 6; ++c) v[c] = {u(rng), u(rng)};
    const SixSpinor psi(v, Representation::Standard);
    spinor = std::max(spinor, (to_standard(to_chiral(psi)).components() - v).cwiseAbs().maxCoeff());
  }

  return {
      within_abs("algebra/helicity-eigen-residual", residual, 1e-13),
      within_abs("algebra/helicity-orthonormality", ortho, 1e-13),
      within_abs("algebra/helicity-axis-vectors", axes, 1e-15),
      within_abs("algebra/spinor-round-trip", spinor, 1e-15),
  };
}

// ---- open-question resolutions --------------------------------------------

std::vector<CheckResult> resolution_momentum(const SurfaceCase& c) {
  std::vector<CheckResult> out;
  for (int n : {1, 3}) {
    const SurfaceWaveSpec spec = surface_spec(c, n);
    const SurfaceWaveParams p = surface_params(spec);
    const auto& k = spec.constants;
    const SurfaceObservables obs = integrate_surface(spec);
    const std::string base = "resolution/surface-momentum/" + c.label + "/n=" + std::to_string(n);
    out.push_back(within_rel(base + "/matches-n-hbar-w2-over-kz-c2", obs.P_z,
                             n * k.hbar * spec.omega * spec.omega / (p.k_z * k.c * k.c), 1e-9));
    // Ratio to the guided-style n hbar kz is 1 - kappa^2/kz^2, not 1.
    out.push_back(within_rel(base + "/ratio-to-n-hbar-kz", obs.P_z / (n * k.hbar * p.k_z),
                             1.0 - (p.kappa * p.kappa) / (p.k_z * p.k_z), 1e-9));
  }
  return out;
}

// Closed form with denominator n1 - i n2, valid away from the poles.
CVec3 closed_form_plus(const Vec3& n) {
  const cplx i{0.0, 1.0};
  const cplx d = n.x() - i * n.y();
  return CVec3((n.x() * n.z() - i * n.y()) / d, (n.y() * n.z() + i * n.x()) / d,
               -(n.x() + i * n.y())) /
         kSqrt2;
}

std::vector<CheckResult> resolution_poles() {
  const double r2 = 1.0 / kSqrt2;
  const cplx i{0.0, 1.0};
  const CVec3 north(r2, i * r2, 0.0);
  const CVec3 south(r2, -i * r2, 0.0);

  const double at_north = (helicity_eigensystem(Vec3::UnitZ()).e(1) - north).norm();
  const double at_south = (helicity_eigensystem(-Vec3::UnitZ()).e(1) - south).norm();
  const double e0_south = (helicity_eigensystem(-Vec3::UnitZ()).e(0) + Vec3::UnitZ().cast<cplx>()).norm();

  double cont_north = 0.0, cont_south = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double phi = 2.0 * kPi * k / 16;
    for (double rho : {1e-9, 1e-10, 1e-12}) {
      const double z = std::sqrt(1.0 - rho * rho);
      const Vec3 up(rho * std::cos(phi), rho * std::sin(phi), z);
      const Vec3 down(rho * std::cos(phi), rho * std::sin(phi), -z);
      cont_north = std::max(cont_north, (helicity_eigensystem(up).e(1) - north).norm());
      cont_south = std::max(cont_south, (helicity_eigensystem(down).e(1) - south).norm());
    }
  }

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  double closed = 0.0;
  int used = 0;
  while (used < 200) {
    const Vec3 n = Vec3(g(rng), g(rng), g(rng)).normalized();
    if (n.z() < -0.9) continue;
    closed = std::max(closed, (helicity_eigensystem(n).e(1) - closed_form_plus(n)).norm());
    ++used;
  }
  return {
      within_abs("resolution/pole-convention/north-pole", at_north, 0.0),
      within_abs("resolution/pole-convention/south-pole-conjugate", at_south, 0.0),
      within_abs("resolution/pole-convention/south-pole-longitudinal", e0_south, 0.0),
      within_abs("resolution/pole-convention/north-continuity", cont_north, 1e-8),
      within_abs("resolution/pole-convention/south-continuity", cont_south, 1e-8),
      within_abs("resolution/pole-convention/matches-closed-form", closed, 1e-13),
  };
}

std::vector<CheckResult> resolution_bridge(const SurfaceCase& c) {
  // TM only: E carries the spin.
  std::vector<CheckResult> out;
  for (Direction dir : {Direction::Forward, Direction::Backward}) {
    const SurfaceWaveSpec spec = surface_spec(c, 1, dir);
    const double x = 0.3 / surface_params(spec).kappa;
    const FieldPhasor f = surface_field_phasor(spec, {x, 0.0, 0.0}, 0.0);
    const double sy = spin_densities(f, spec.omega, spec.constants).s_e.y();
    const double e2 = f.E.squaredNorm();
    const HelicityCoefficients along_y = decompose_polarization(f.E, Vec3::UnitY());
    const HelicityCoefficients along_x = decompose_polarization(f.E, Vec3::UnitX());
    const double imbalance = std::norm(along_y.plus) - std::norm(along_y.minus);
    const std::string base = "resolution/helicity-spin-bridge/" + c.label +
                             (dir == Direction::Forward ? "/+z" : "/-z");
    out.push_back(within_rel(base + "/sign-along-y", std::copysign(1.0, imbalance),
                             std::copysign(1.0, sy), 0.0));
    out.push_back(within_abs(base + "/balanced-along-x",
                             (std::norm(along_x.plus) - std::norm(along_x.minus)) / e2, 1e-15));
  }
  return out;
}

template <class Case, class Fn>
void add_each(std::vector<CheckDefinition>& out, const std::vector<Case>& cases,
              const std::string& prefix, Fn fn) {
  for (const auto& c : cases) {
    out.push_back({prefix + c.label, [c, fn] { return fn(c); }});
  }
}

}  // namespace

const std::vector<CheckDefinition>& check_catalogue() {
  static const std::vector<CheckDefinition> catalogue = [] {
    std::vector<CheckDefinition> out;
    for (const auto& c : guided_cases()) {
      for (const auto& r : ratios()) {
        out.push_back({"guided/closed-form/" + c.label + "/w=" + r.label,
                       [c, r] { return guided_closed_form(c, r); }});
        out.push_back({"guided/quantization/" + c.label + "/w=" + r.label,
                       [c, r] { return guided_quantization(c, r); }});
      }
    }
    add_each(out, guided_cases(), "guided/pointwise/", guided_pointwise);
    add_each(out, guided_cases(), "guided/derived/", guided_derived);
    out.push_back({"guided/figure", guided_figures});
    add_each(out, surface_cases(), "surface/totals/", surface_totals);
    add_each(out, surface_cases(), "surface/pointwise/", surface_pointwise);
    out.push_back({"algebra/matrices", algebra_matrices});
    out.push_back({"algebra/helicity", algebra_helicity});
    add_each(out, surface_cases(), "resolution/surface-momentum/", resolution_momentum);
    out.push_back({"resolution/pole-convention", resolution_poles});
    std::vector<SurfaceCase> tm;
    for (const auto& c : surface_cases()) {
      if (c.family == Family::TM) tm.push_back(c);
    }
    add_each(out, tm, "resolution/helicity-spin-bridge/", resolution_bridge);
    return out;
  }();
  return catalogue;
}

std::vector<CheckResult> run_checks(std::string_view filter) {
  std::vector<CheckResult> results;
  for (const auto& def : check_catalogue()) {
    if (!filter.empty() && def.name.find(filter) == std::string::npos) continue;
    try {
      for (auto& r : def.run()) results.push_back(std::move(r));
    } catch (const std::exception& e) {
      // An exception fails the whole group; record it under the group name.
      results.push_back({def.name + " [threw: " + e.what() + "]", 0.0,
                         std::numeric_limits<double>::quiet_NaN(), 0.0, false});
    }
  }
  return results;
}

void print_check_table(const std::vector<CheckResult>& results, std::ostream& out) {
  std::size_t width = 5;
  for (const auto& r : results) width = std::max(width, r.name.size());
  std::size_t failed = 0;
  out << std::left << std::setw(6) << "status" << std::setw(static_cast<int>(width) + 2) << "check"
      << std::setw(26) << "expected" << std::setw(26) << "actual"
      << "tolerance\n";
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    out << std::left << std::setw(6) << (r.passed ? "PASS" : "FAIL")
        << std::setw(static_cast<int>(width) + 2) << r.name << std::setw(26)
        << format_double(r.expected) << std::setw(26) << format_double(r.actual)
        << format_double(r.tolerance) << '\n';
  }
  out << results.size() << " checks, " << failed << " failed\n";
  for (const auto& r : results) {
    if (r.passed) continue;
    out << "FAILED " << r.name << ": expected " << format_double(r.expected) << ", actual "
        << format_double(r.actual) << ", tolerance " << format_double(r.tolerance) << '\n';
  }
}

}  // namespace transpin::cli
