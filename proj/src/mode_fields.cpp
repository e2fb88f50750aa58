#include "transpin/mode_fields.hpp"

#include <cmath>
#include <string>

#include "transpin/errors.hpp"

namespace transpin {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and > 0, got " + std::to_string(v));
  }
}

}  // namespace

std::string_view to_string(UnitSystem u) { return u == UnitSystem::SI ? "si" : "natural"; }
std::string_view to_string(Family f) { return f == Family::TM ? "TM" : "TE"; }
std::string_view to_string(Direction d) { return d == Direction::Forward ? "+z" : "-z"; }

void WaveguideGeometry::validate() const {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(L, "L");
  if (a < b) throw DomainError("waveguide requires a >= b");
}

void ModeIndex::validate() const {
  if (m < 0 || n < 0) throw RejectedModeError("mode indices must be non-negative");
  if (family == Family::TM && (m < 1 || n < 1)) {
    throw RejectedModeError("TM" + std::to_string(m) + std::to_string(n) +
                            " rejected: TM modes need m >= 1 and n >= 1");
  }
  if (family == Family::TE && m < 1) {
    throw RejectedModeError("TE" + std::to_string(m) + std::to_string(n) +
                            " rejected: TE modes need m >= 1");
  }
}

void GuidedModeSpec::validate() const {
  geometry.validate();
  index.validate();
  require_positive(omega, "omega");
  require_positive(amplitude_h, "amplitude_h");
}

void SurfaceWaveSpec::validate() const {
  require_positive(eta, "eta");
  require_positive(omega, "omega");
  require_positive(amplitude_hp, "amplitude_hp");
  require_positive(area_A, "area_A");
  if (!(eta * std::sin(phi) > 1.0)) {
    throw DomainError("surface wave needs eta*sin(phi) > 1, got " +
                      std::to_string(eta * std::sin(phi)));
  }
}

double cutoff_frequency(const WaveguideGeometry& geometry, const ModeIndex& index,
                        const PhysicalConstants& k) {
  index.validate();
  const double p = index.m / geometry.a;
  const double q = index.n / geometry.b;
  return k.c * kPi * std::sqrt(p * p + q * q);
}

std::complex<double> axial_wavenumber(double omega, double omega_c, double c,
                                      Direction direction) {
  if (!(omega > 0.0) || !(omega_c > 0.0)) {
    throw DomainError("axial_wavenumber needs omega > 0 and omega_c > 0");
  }
  // (w - wc)(w + wc) avoids cancellation near cutoff.
  const double d = (omega - omega_c) * (omega + omega_c);
  const cplx kz = d >= 0.0 ? cplx(std::sqrt(d) / c, 0.0) : cplx(0.0, std::sqrt(-d) / c);
  return sign_of(direction) * kz;
}

GuidedModeParams guided_params(const GuidedModeSpec& spec) {
  spec.validate();
  GuidedModeParams p;
  p.omega_c = cutoff_frequency(spec.geometry, spec.index, spec.constants);
  p.k_z = axial_wavenumber(spec.omega, p.omega_c, spec.constants.c, spec.direction);
  p.kx = spec.index.m * kPi / spec.geometry.a;
  p.ky = spec.index.n * kPi / spec.geometry.b;
  p.propagating = spec.omega > p.omega_c;
  return p;
}

FieldPhasor guided_field_phasor(const GuidedModeSpec& spec, const Point3& pt, double t) {
  const GuidedModeParams p = guided_params(spec);
  const auto& g = spec.geometry;
  if (pt.x < 0.0 || pt.x > g.a || pt.y < 0.0 || pt.y > g.b) {
    throw DomainError("point (" + std::to_string(pt.x) + ", " + std::to_string(pt.y) +
                      ") lies outside the waveguide cross-section");
  }
  const double c2 = spec.constants.c * spec.constants.c;
  const double w = spec.omega;
  const double wc2 = p.omega_c * p.omega_c;
  const double sx = std::sin(p.kx * pt.x), cx = std::cos(p.kx * pt.x);
  const double sy = std::sin(p.ky * pt.y), cy = std::cos(p.ky * pt.y);
  const cplx phase = std::exp(-kI * (w * t - p.k_z * pt.z));

  FieldPhasor f;
  if (spec.index.family == Family::TM) {
    const double E0 = spec.amplitude_h;
    f.E.x() = kI * p.kx * (p.k_z / wc2) * c2 * E0 * cx * sy * phase;
    f.E.y() = kI * p.ky * (p.k_z / wc2) * c2 * E0 * sx * cy * phase;
    f.E.z() = E0 * sx * sy * phase;
    f.B.x() = -kI * p.ky * (w / wc2) * E0 * sx * cy * phase;
    f.B.y() = kI * p.kx * (w / wc2) * E0 * cx * sy * phase;
    f.B.z() = 0.0;
  } else {
    const double B0 = spec.amplitude_h / spec.constants.c;
    f.E.x() = -kI * p.ky * (w / wc2) * c2 * B0 * cx * sy * phase;
    f.E.y() = kI * p.kx * (w / wc2) * c2 * B0 * sx * cy * phase;
    f.E.z() = 0.0;
    f.B.x() = -kI * p.kx * (p.k_z / wc2) * c2 * B0 * sx * cy * phase;
    f.B.y() = -kI * p.ky * (p.k_z / wc2) * c2 * B0 * cx * sy * phase;
    f.B.z() = B0 * cx * cy * phase;
  }
  return f;
}

SurfaceWaveParams surface_params(const SurfaceWaveSpec& spec) {
  spec.validate();
  const double k0 = spec.omega / spec.constants.c;
  const double es = spec.eta * std::sin(spec.phi);
  // sqrt((es - 1)(es + 1)) keeps accuracy near the critical angle.
  return {k0 * std::sqrt((es - 1.0) * (es + 1.0)), sign_of(spec.direction) * k0 * es};
}

FieldPhasor surface_field_phasor(const SurfaceWaveSpec& spec, const Point3& pt, double t) {
  const SurfaceWaveParams p = surface_params(spec);
  if (pt.x < 0.0) {
    throw DomainError("surface-wave fields are defined only for x >= 0 (vacuum side)");
  }
  const double c = spec.constants.c;
  const double w = spec.omega;
  const cplx env = std::exp(kI * (p.k_z * pt.z - w * t) - p.kappa * pt.x);

  FieldPhasor f;
  if (spec.family == Family::TM) {
    const double a0 = spec.amplitude_hp / c;
    f.E.x() = (p.k_z / w) * c * c * a0 * env;
    f.E.z() = (-kI * p.kappa / w) * c * c * a0 * env;
    f.B.y() = a0 * env;
  } else {
    const double b0 = spec.amplitude_hp;
    f.E.y() = b0 * env;
    f.B.x() = -(p.k_z / w) * b0 * env;
    f.B.z() = (kI * p.kappa / w) * b0 * env;
  }
  return f;
}

}  // namespace transpin
