#pragma once

#include <vector>

namespace transpin {

/// Nodes and weights of a one-dimensional rule on an interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1]; Newton iteration on P_n from the
/// Tricomi initial guesses. Exact for polynomials of degree <= 2n - 1.
QuadratureRule gauss_legendre(int n);

/// Affine image of `rule` on [lo, hi].
QuadratureRule map_to_interval(const QuadratureRule& rule, double lo, double hi);

/// Gauss-Legendre rule on [lo, hi] split into `panels` equal sub-intervals.
QuadratureRule composite_gauss_legendre(int nodes_per_panel, int panels, double lo, double hi);

}  // namespace transpin
