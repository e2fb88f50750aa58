#include "transpin/quadrature.hpp"

#include <cmath>
#include <string>

#include "transpin/errors.hpp"
#include "transpin/types.hpp"

namespace transpin {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre rule needs n >= 1, got " + std::to_string(n));
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::abs(x) + 1e-300) break;
    }
    // Re-evaluate the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

QuadratureRule map_to_interval(const QuadratureRule& rule, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  QuadratureRule out;
  out.nodes.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out.nodes.push_back(mid + half * rule.nodes[i]);
    out.weights.push_back(half * rule.weights[i]);
  }
  return out;
}

QuadratureRule composite_gauss_legendre(int nodes_per_panel, int panels, double lo, double hi) {
  if (panels < 1) throw ConfigError("composite rule needs at least one panel");
  const QuadratureRule base = gauss_legendre(nodes_per_panel);
  QuadratureRule out;
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const QuadratureRule part = map_to_interval(base, lo + p * width, lo + (p + 1) * width);
    out.nodes.insert(out.nodes.end(), part.nodes.begin(), part.nodes.end());
    out.weights.insert(out.weights.end(), part.weights.begin(), part.weights.end());
  }
  return out;
}

}  // namespace transpin
