#pragma once

#include <complex>

#include <Eigen/Dense>

namespace transpin {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

enum class Family { TM, TE };

/// Propagation sense along the axis; Backward negates k_z in every formula.
enum class Direction { Forward, Backward };

inline double sign_of(Direction d) { return d == Direction::Forward ? 1.0 : -1.0; }

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Complex electric and magnetic 3-vectors at a point (time factor included).
struct FieldPhasor {
  CVec3 E = CVec3::Zero();  // V/m
  CVec3 B = CVec3::Zero();  // T
};

}  // namespace transpin
