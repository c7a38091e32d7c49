#include <doctest.h>

#include <cmath>

#include "dynint/core/function.hpp"
#include "dynint/numerics/jet.hpp"

using namespace dynint;

namespace {

template <class T>
T sample_fn(const T& x, const T& y) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  return sin(x * y) + exp(x) / (1.0 + y * y) + log(2.0 + x) * sqrt(3.0 + y) - pow(x, 3.0) + cos(y) * x;
}

}  // namespace

TEST_SUITE("jet") {
  TEST_CASE("first derivatives match central differences") {
    for (double x : {-0.7, 0.1, 0.9}) {
      for (double y : {-1.3, 0.4, 2.0}) {
        const Jet1 jx = Jet1::variable(x, 2, 0), jy = Jet1::variable(y, 2, 1);
        const Jet1 r = sample_fn(jx, jy);
        CHECK(r.value() == doctest::Approx(sample_fn(x, y)).epsilon(1e-15));
        const double h = 1e-6;
        const double dx = (sample_fn(x + h, y) - sample_fn(x - h, y)) / (2 * h);
        const double dy = (sample_fn(x, y + h) - sample_fn(x, y - h)) / (2 * h);
        CHECK(r.d(0) == doctest::Approx(dx).epsilon(1e-8));
        CHECK(r.d(1) == doctest::Approx(dy).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("nested jets give exact second derivatives of a polynomial") {
    // f = x^2 y + 3 y^3 ; f_xx = 2y, f_xy = 2x, f_yy = 18y
    const double x = 1.5, y = -0.5;
    auto var = [](double v, std::size_t i) { return Jet2::variable(Jet1::variable(v, 2, i), 2, i); };
    const Jet2 jx = var(x, 0), jy = var(y, 1);
    const Jet2 f = jx * jx * jy + 3.0 * jy * jy * jy;
    CHECK(f.value().value() == doctest::Approx(x * x * y + 3 * y * y * y));
    CHECK(f.d(0).value() == doctest::Approx(2 * x * y));
    CHECK(f.d(0).d(0) == doctest::Approx(2 * y));
    CHECK(f.d(0).d(1) == doctest::Approx(2 * x));
    CHECK(f.d(1).d(1) == doctest::Approx(18 * y));
  }

  TEST_CASE("domain errors") {
    const Jet1 z = Jet1::variable(0.0, 1, 0);
    CHECK_THROWS_AS(log(z), DomainError);
    CHECK_THROWS_AS(1.0 / z, DomainError);
    CHECK_THROWS_AS(sqrt(z - 1.0), DomainError);
  }

  TEST_CASE("pow with a constant jet exponent keeps negative bases legal") {
    const Jet1 x = Jet1::variable(-2.0, 1, 0);
    const Jet1 r = pow(x, Jet1(3.0));
    CHECK(r.value() == doctest::Approx(-8.0));
    CHECK(r.d(0) == doctest::Approx(12.0));
  }

  TEST_CASE("partials beyond size stay zero and mixing sizes works") {
    const Jet1 a = Jet1::variable(1.0, 3, 2);
    const Jet1 b(2.0);
    const Jet1 c = a * b + b;
    CHECK(c.size() == 3);
    CHECK(c.d(0) == 0.0);
    CHECK(c.d(2) == 2.0);
    CHECK(is_constant(b));
    CHECK_FALSE(is_constant(a));
  }

  TEST_CASE("VectorFunction jacobian: jets, analytic, finite differences") {
    const auto fn = VectorFunction::generic("polar", 2, 2, [](auto x, auto out) {
      using std::cos;
      using std::sin;
      out[0] = x[0] * cos(x[1]);
      out[1] = x[0] * sin(x[1]);
    });
    const std::vector<double> p{2.0, 0.3};
    const DenseMatrix j = fn.jacobian(p);
    CHECK(j(0, 0) == doctest::Approx(std::cos(0.3)));
    CHECK(j(0, 1) == doctest::Approx(-2.0 * std::sin(0.3)));
    CHECK(j(1, 1) == doctest::Approx(2.0 * std::cos(0.3)));
    const DenseMatrix fd = fn.jacobian(p, DerivativeMode::finite_difference);
    CHECK((fd - j).max_abs() < 1e-8);

    const VectorFunction black("box", 1, 1, [](std::span<const double> x, std::span<double> o) { o[0] = x[0] * x[0]; });
    const std::vector<double> q{3.0};
    CHECK_THROWS_AS(black.jacobian(q), DerivativeUnavailable);
    CHECK(black.jacobian(q, DerivativeMode::finite_difference)(0, 0) == doctest::Approx(6.0).epsilon(1e-8));
  }
}
