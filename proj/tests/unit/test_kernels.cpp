#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "transpin/errors.hpp"
#include "transpin/kernels.hpp"

using namespace transpin;
using namespace transpin::kernels;

namespace {

Values<2> integrand(double x, double y, double z) {
  return {std::sin(3.0 * x) * std::cos(y) * std::exp(z), x * y * y + z};
}

struct ThreadCapGuard {
  ~ThreadCapGuard() { set_thread_cap(0); }
};

}  // namespace

TEST_CASE("parallel tensor quadrature agrees with the serial reference") {
  const QuadratureRule r = map_to_interval(gauss_legendre(9), 0.0, 1.0);
  const Values<2> par = tensor_quadrature<2>(r, r, r, integrand);
  const Values<2> ser = tensor_quadrature_serial<2>(r, r, r, integrand);
  for (int k = 0; k < 2; ++k) CHECK(std::abs(par[k] - ser[k]) <= 1e-14 * std::abs(ser[k]));
  // int_0^1 x y^2 + z = 1/6 + 1/2
  CHECK(par[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  const double exact0 = (1.0 - std::cos(3.0)) / 3.0 * std::sin(1.0) * (std::exp(1.0) - 1.0);
  CHECK(par[0] == doctest::Approx(exact0).epsilon(1e-12));
}

TEST_CASE("results are bit-identical across thread counts") {
  ThreadCapGuard guard;
  const QuadratureRule r = map_to_interval(gauss_legendre(13), -1.0, 2.0);
  set_thread_cap(1);
  const Values<2> one = tensor_quadrature<2>(r, r, r, integrand);
  const auto grid_one = evaluate_grid<double>(37, 11, [](int i, int j) { return std::sin(i * 0.1 + j); });
  for (int threads : {2, 4}) {
    set_thread_cap(threads);
    const Values<2> many = tensor_quadrature<2>(r, r, r, integrand);
    CHECK(many[0] == one[0]);
    CHECK(many[1] == one[1]);
    const auto grid = evaluate_grid<double>(37, 11, [](int i, int j) { return std::sin(i * 0.1 + j); });
    CHECK(grid == grid_one);
  }
}

TEST_CASE("grid evaluation order and serial agreement") {
  const auto par = evaluate_grid<int>(5, 3, [](int i, int j) { return 10 * j + i; });
  const auto ser = evaluate_grid_serial<int>(5, 3, [](int i, int j) { return 10 * j + i; });
  CHECK(par == ser);
  REQUIRE(par.size() == 15);
  CHECK(par[0] == 0);
  CHECK(par[4] == 4);
  CHECK(par[5] == 10);
  CHECK(par[14] == 24);
}

TEST_CASE("line quadrature matches its serial reference") {
  const QuadratureRule r = composite_gauss_legendre(8, 10, 0.0, 5.0);
  auto f = [](double x) { return Values<1>{std::exp(-x) * x}; };
  const double par = line_quadrature<1>(r, f)[0];
  const double ser = line_quadrature_serial<1>(r, f)[0];
  CHECK(par == doctest::Approx(ser).epsilon(1e-15));
  CHECK(par == doctest::Approx(1.0 - 6.0 * std::exp(-5.0)).epsilon(1e-14));
}

TEST_CASE("exceptions inside a parallel region reach the caller") {
  const QuadratureRule r = gauss_legendre(6);
  auto bad = [](double x, double, double) -> Values<1> {
    if (x > 0.5) throw DomainError("outside");
    return {x};
  };
  CHECK_THROWS_AS(tensor_quadrature<1>(r, r, r, bad), DomainError);
  CHECK_THROWS_AS(evaluate_grid<int>(4, 4,
                                     [](int i, int) -> int {
                                       if (i == 3) throw std::logic_error("boom");
                                       return i;
                                     }),
                  std::logic_error);
}

TEST_CASE("pairwise sum is exact for small integers") {
  std::vector<Values<1>> v(1000, Values<1>{1.0});
  CHECK(pairwise_sum<1>(std::span<const Values<1>>(v))[0] == 1000.0);
  CHECK(pairwise_sum<1>(std::span<const Values<1>>())[0] == 0.0);
}

TEST_CASE("thread cap from the environment") {
  ::setenv("TRANSPIN_THREADS", "3", 1);
  CHECK(thread_cap_from_env() == 3);
  ::setenv("TRANSPIN_THREADS", "0", 1);
  CHECK(thread_cap_from_env() == 0);
  ::setenv("TRANSPIN_THREADS", "two", 1);
  CHECK_THROWS_AS(thread_cap_from_env(), ConfigError);
  ::setenv("TRANSPIN_THREADS", "-1", 1);
  CHECK_THROWS_AS(thread_cap_from_env(), ConfigError);
  ::setenv("TRANSPIN_THREADS", "4x", 1);
  CHECK_THROWS_AS(thread_cap_from_env(), ConfigError);
  ::unsetenv("TRANSPIN_THREADS");
  CHECK(thread_cap_from_env() == 0);
}
