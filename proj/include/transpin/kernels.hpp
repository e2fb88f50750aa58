#pragma once

// Data-parallel kernels behind the quadrature totals and the spin-map grids.
//
// Each kernel has an OpenMP version and a plain serial reference kept for
// testing. The OpenMP versions write every sample into its own slot and then
// reduce with a fixed pairwise tree, so results are bit-identical for any
// thread count.

#include <array>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "transpin/quadrature.hpp"

namespace transpin::kernels {

template <std::size_t K>
using Values = std::array<double, K>;

/// Cap for OpenMP parallel regions; 0 restores the runtime default.
void set_thread_cap(int threads);

/// Reads TRANSPIN_THREADS (0 or unset = auto). Throws ConfigError on junk.
int thread_cap_from_env();

int max_threads();

namespace detail {

template <std::size_t K>
Values<K> add(const Values<K>& a, const Values<K>& b) {
  Values<K> r;
  for (std::size_t k = 0; k < K; ++k) r[k] = a[k] + b[k];
  return r;
}

// Captures the first exception thrown inside a parallel loop and rethrows it
// after the region ends.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
#pragma omp critical(transpin_exception_slot)
      if (!ptr_) ptr_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (ptr_) std::rethrow_exception(ptr_);
  }

 private:
  std::exception_ptr ptr_;
};

}  // namespace detail

/// Sum with a fixed split tree; the result depends only on the input order.
template <std::size_t K>
Values<K> pairwise_sum(std::span<const Values<K>> v) {
  if (v.empty()) return Values<K>{};
  if (v.size() <= 8) {
    Values<K> acc = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) acc = detail::add(acc, v[i]);
    return acc;
  }
  const std::size_t mid = v.size() / 2;
  return detail::add(pairwise_sum<K>(v.first(mid)), pairwise_sum<K>(v.subspan(mid)));
}

/// Integral of f(x, y, z) -> Values<K> over the tensor product of three rules.
template <std::size_t K, class F>
Values<K> tensor_quadrature(const QuadratureRule& rx, const QuadratureRule& ry,
                            const QuadratureRule& rz, F&& f) {
  const long nx = static_cast<long>(rx.size());
  const long ny = static_cast<long>(ry.size());
  const long nz = static_cast<long>(rz.size());
  const long total = nx * ny * nz;
  std::vector<Values<K>> samples(static_cast<std::size_t>(total));
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    slot.run([&] {
      const long i = idx % nx;
      const long j = (idx / nx) % ny;
      const long k = idx / (nx * ny);
      const double w = rx.weights[i] * ry.weights[j] * rz.weights[k];
      Values<K> v = f(rx.nodes[i], ry.nodes[j], rz.nodes[k]);
      for (auto& c : v) c *= w;
      samples[static_cast<std::size_t>(idx)] = v;
    });
  }
  slot.rethrow();
  return pairwise_sum<K>(std::span<const Values<K>>(samples));
}

/// Serial reference: straight nested accumulation.
template <std::size_t K, class F>
Values<K> tensor_quadrature_serial(const QuadratureRule& rx, const QuadratureRule& ry,
                                   const QuadratureRule& rz, F&& f) {
  Values<K> acc{};
  for (std::size_t k = 0; k < rz.size(); ++k) {
    for (std::size_t j = 0; j < ry.size(); ++j) {
      for (std::size_t i = 0; i < rx.size(); ++i) {
        const double w = rx.weights[i] * ry.weights[j] * rz.weights[k];
        const Values<K> v = f(rx.nodes[i], ry.nodes[j], rz.nodes[k]);
        for (std::size_t c = 0; c < K; ++c) acc[c] += w * v[c];
      }
    }
  }
  return acc;
}

/// One-dimensional specialization used for the surface-wave depth integrals.
template <std::size_t K, class F>
Values<K> line_quadrature(const QuadratureRule& r, F&& f) {
  const QuadratureRule unit{{0.0}, {1.0}};
  return tensor_quadrature<K>(r, unit, unit, [&](double x, double, double) { return f(x); });
}

template <std::size_t K, class F>
Values<K> line_quadrature_serial(const QuadratureRule& r, F&& f) {
  Values<K> acc{};
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Values<K> v = f(r.nodes[i]);
    for (std::size_t c = 0; c < K; ++c) acc[c] += r.weights[i] * v[c];
  }
  return acc;
}

/// f(i, j) on an nx-by-ny grid, returned in y-major order (index j*nx + i).
template <class T, class F>
std::vector<T> evaluate_grid(int nx, int ny, F&& f) {
  const long total = static_cast<long>(nx) * ny;
  std::vector<T> out(static_cast<std::size_t>(total));
  detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    slot.run([&] {
      out[static_cast<std::size_t>(idx)] =
          f(static_cast<int>(idx % nx), static_cast<int>(idx / nx));
    });
  }
  slot.rethrow();
  return out;
}

template <class T, class F>
std::vector<T> evaluate_grid_serial(int nx, int ny, F&& f) {
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) out.push_back(f(i, j));
  }
  return out;
}

}  // namespace transpin::kernels
