#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynint/catalog/catalog.hpp"
#include "dynint/certify/certify.hpp"
#include "dynint/core/iterate.hpp"

using namespace dynint;

namespace {

constexpr double kPi = std::numbers::pi;
std::vector<double> pt(std::initializer_list<double> v) { return v; }

}  // namespace

TEST_CASE("every entry builds with its defaults") {
  for (const auto& e : catalog()) {
    INFO(e.name);
    const auto sys = build(e.name);
    CHECK(sys.map.dim() == sys.region.dim());
    if (sys.structure) CHECK(sys.structure->dim == sys.map.dim());
    CHECK(sys.params.size() == e.params.size());
  }
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(build("nope"), ConfigError);
  CHECK_THROWS_AS(build("warned_circle", {{"k", "1"}, {"eps", "1.5"}}), ConfigError);
  CHECK_THROWS_AS(build("affine1d", {{"a", "0"}}), ConfigError);
  CHECK_THROWS_AS(build("affine1d", {{"c", "1"}}), ConfigError);
  CHECK_THROWS_AS(build("lyness", {{"n", "6"}}), ConfigError);
  CHECK_THROWS_AS(build("lyness", {{"a", "-1"}}), ConfigError);
  CHECK_THROWS_AS(build("lyness", {{"n", "2.5"}}), ConfigError);
  CHECK_THROWS_AS(build("twist", {{"H", "p1^"}}), ConfigError);
}

TEST_CASE("cat map is a torus map without structure") {
  const auto cat = build("cat_map");
  CHECK(cat.map.topology()[0].is_circle());
  CHECK(cat.map.topology()[1].is_circle());
  CHECK_FALSE(cat.structure.has_value());
  CHECK(cat.label == "no structure certified");
}

TEST_CASE("lyness integral values") {
  const auto v = lyness_integral_values(3, 1.0, pt({1, 1, 1}));
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 32.0);
  CHECK(v[2] == 12.0);
  const auto a = lyness_integral_values(3, 1.0, pt({1, 2, 3}));
  const auto b = lyness_integral_values(3, 1.0, pt({2, 3, 6}));
  CHECK(a[1] == doctest::Approx(40.0));
  CHECK(b[1] == doctest::Approx(40.0));
  CHECK(lyness_integral_values(2, 1.0, pt({1, 2}))[0] == 12.0);
  CHECK(lyness_map(3, 1.0)(pt({1, 2, 3})) == std::vector<double>{2, 3, 6});
  CHECK_THROWS_AS(lyness_f3(4, 1.0, pt({1, 1, 1, 1})), ConfigError);
  CHECK(lyness_f2_bound(3) == 2);
}

TEST_CASE("lyness n = 2 structure is integrals only") {
  const auto ly = build("lyness", {{"n", "2"}, {"a", "1"}});
  REQUIRE(ly.structure);
  CHECK(ly.structure->fields.empty());
  CHECK(ly.structure->integrals.size() == 1);
  CHECK(ly.structure->partial);
}

TEST_CASE("lyness integrals are invariant") {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (double a : {1.0, 2.0}) {
      const auto f = lyness_map(n, a);
      SamplingRegion r{Vector(n, 0.1), Vector(n, 10.0), 0.0, f.guard(), 200, 42};
      const auto xs = sample(r);
      for (const auto& F : lyness_integrals(n, a)) {
        double worst = 0.0;
        for (const auto& x : xs) {
          const double before = F(x);
          worst = std::max(worst, std::fabs(F(f(x)) - before) / (1.0 + std::fabs(before)));
        }
        INFO(n, " ", a, " ", F.name());
        CHECK(worst <= 1e-10);
      }
    }
  }
}

TEST_CASE("lyness inverse undoes the map") {
  const auto f = lyness_map(4, 2.0);
  const auto x = pt({0.5, 1.5, 2.5, 3.5});
  const auto y = f.inverse(f(x));
  for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(x[i]));
}

TEST_CASE("lyness n = 2, a = 1 is 5-periodic") {
  const auto f = lyness_map(2, 1.0);
  SamplingRegion r{Vector(2, 0.1), Vector(2, 10.0), 0.0, f.guard(), 100, 42};
  for (const auto& x : sample(r)) {
    const auto y = iterate(f, x, 5);
    CHECK(std::fabs(y[0] - x[0]) / x[0] <= 1e-9);
    CHECK(std::fabs(y[1] - x[1]) / x[1] <= 1e-9);
  }
}

TEST_CASE("printed lyness symmetry and the variant search") {
  const auto ly = build("lyness", {{"n", "3"}});
  REQUIRE(ly.structure);
  CHECK(ly.structure->unverified);
  CHECK(ly.structure->fields.size() == 1);
  CHECK(ly.structure->integrals.size() == 2);
  const auto rep = lyness_variant_search(3, 1.0, 100, 50, 42);
  CHECK(rep.scores.size() == 100);
  CHECK(rep.scores[0].description == "printed");
  CHECK(rep.scores[rep.best].max_residual <= rep.scores[0].max_residual);
  const auto again = lyness_variant_search(3, 1.0, 100, 50, 42);
  CHECK(again.scores[17].max_residual == rep.scores[17].max_residual);
  const auto plain = build("lyness", {{"n", "3"}, {"symmetry", "0"}});
  CHECK(plain.structure->fields.empty());
  CHECK(plain.structure->integrals.size() == 3);
}

TEST_CASE("warned circle maps arcs onto the next arc") {
  for (long k : {1, 2, 3}) {
    const auto w = build("warned_circle", {{"k", std::to_string(k)}, {"eps", std::to_string(0.3 / k)}});
    const double step = kPi / k;
    for (int j = 1; j <= 2 * k; ++j) {
      const double lo = (j - 1) * step, hi = j * step;
      CHECK(w.map.lift(pt({lo}))[0] == doctest::Approx(lo + step).epsilon(1e-15));
      CHECK(w.map.lift(pt({hi}))[0] == doctest::Approx(hi + step).epsilon(1e-15));
      double prev = w.map.lift(pt({lo}))[0];
      for (int i = 1; i <= 20; ++i) {
        const double y = w.map.lift(pt({lo + (hi - lo) * i / 20.0}))[0];
        CHECK(y > prev);
        prev = y;
      }
    }
  }
}

TEST_CASE("expected verdicts of the structured entries") {
  for (const char* name : {"affine1d", "rigid_rotation", "linear", "twist"}) {
    INFO(name);
    const auto sys = build(name);
    SamplingRegion r = sys.region;
    r.sample_count = 200;
    CHECK(certify_structure(sys.map, *sys.structure, r).verdict == Verdict::pass);
  }
}

TEST_CASE("twist system exposes the symbolic gradient") {
  const auto t = twist_system("p1^2/2 + p1*p2", 2);
  CHECK(t.gradient.size() == 2);
  const auto z = t.map(pt({0, 0, 1.0, 2.0}));
  CHECK(z[0] == doctest::Approx(3.0));
  CHECK(z[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(twist_system("q1 + p1", 2), ConfigError);
}
