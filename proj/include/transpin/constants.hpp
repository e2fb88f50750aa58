#pragma once

#include <string_view>

namespace transpin {

/// SI or natural (c = eps0 = mu0 = hbar = 1) unit system.
enum class UnitSystem { SI, Natural };

struct PhysicalConstants {
  double c;     // m/s
  double eps0;  // F/m
  double mu0;   // H/m
  double hbar;  // J s

  /// CODATA 2018. eps0 is derived from mu0 so that c^2 eps0 mu0 == 1 to rounding.
  static constexpr PhysicalConstants si() {
    constexpr double c = 299792458.0;
    constexpr double mu0 = 1.25663706212e-6;
    return {c, 1.0 / (mu0 * c * c), mu0, 1.054571817e-34};
  }

  static constexpr PhysicalConstants natural() { return {1.0, 1.0, 1.0, 1.0}; }

  static constexpr PhysicalConstants of(UnitSystem u) {
    return u == UnitSystem::SI ? si() : natural();
  }
};

std::string_view to_string(UnitSystem u);

}  // namespace transpin
