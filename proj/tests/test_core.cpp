#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

#include "dynint/core/iterate.hpp"
#include "dynint/core/parallel.hpp"
#include "dynint/core/sampling.hpp"
#include "dynint/core/structure.hpp"

using namespace dynint;

TEST_CASE("angles reduce into [0, c) and differences fold to the short arc") {
  const double c = 2 * std::numbers::pi;
  CHECK(reduce_angle(-0.5, c) == doctest::Approx(c - 0.5));
  CHECK(reduce_angle(7.0, c) == doctest::Approx(7.0 - c));
  CHECK(reduce_angle(c, c) == 0.0);
  CHECK(wrap_difference(c - 0.1, c) == doctest::Approx(-0.1));
  const Topology t{Coordinate::circle(1.0), Coordinate::line()};
  const std::vector<double> a{0.95, 3.0}, b{0.05, 1.0};
  CHECK(difference(a, b, t)[0] == doctest::Approx(-0.1));
  CHECK(difference(a, b, t)[1] == doctest::Approx(2.0));
  CHECK(distance(a, b, t) == doctest::Approx(2.0));
}

TEST_CASE("sampling is reproducible, substream based and honours the guard") {
  SamplingRegion r{{0.0, 0.0}, {1.0, 2.0}, 0.0, [](std::span<const double> x) { return x[0] > 0.5; }, 100, 7};
  const auto a = sample(r);
  const auto b = sample(r);
  CHECK(a == b);
  CHECK(a.size() == 100);
  for (const auto& x : a) {
    CHECK(x[0] > 0.5);
    CHECK(x[1] >= 0.0);
    CHECK(x[1] < 2.0);
  }
  r.seed = 8;
  CHECK(sample(r) != a);
  // the first points do not depend on how many are requested
  r.seed = 7;
  const auto few = sample(r, 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(few[i] == a[i]);
}

TEST_CASE("sampling fails on an impossible guard and rejects bad regions") {
  SamplingRegion r{{0.0}, {1.0}, 0.0, [](std::span<const double>) { return false; }, 5, 1};
  CHECK_THROWS_AS(sample(r), ConfigError);
  SamplingRegion bad{{1.0}, {0.0}, 0.0, {}, 5, 1};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("substreams are independent of each other") {
  SubstreamRng a(42, 0), b(42, 1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    seen.insert(a.next());
    seen.insert(b.next());
  }
  CHECK(seen.size() == 200);
  SubstreamRng u(1, 2);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("parallel_for visits every index once and rethrows the lowest failing index") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 80) throw DomainError("at " + std::to_string(i));
    });
    FAIL("expected exception");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()) == "at 17");
  }
  CHECK(worker_count() >= 1);
}

TEST_CASE("iterate reduces circles, uses the inverse and reports guard steps") {
  SmoothMap rot(VectorFunction::generic("rot", 1, 1, [](auto x, auto o) { o[0] = x[0] + 0.75; }),
                Topology{Coordinate::circle(1.0)});
  const std::vector<double> x0{0.5};
  CHECK(iterate(rot, x0, 2)[0] == doctest::Approx(0.0));
  CHECK_THROWS_AS(iterate(rot, x0, -1), ConfigError);
  rot.with_inverse(VectorFunction::generic("rot^-1", 1, 1, [](auto x, auto o) { o[0] = x[0] - 0.75; }));
  CHECK(iterate(rot, x0, -1)[0] == doctest::Approx(0.75));

  const SmoothMap grow(VectorFunction::generic("grow", 1, 1, [](auto x, auto o) { o[0] = x[0] + 1.0; }), {},
                       [](std::span<const double> x) { return x[0] < 3.5; });
  const std::vector<double> z{0.0};
  try {
    iterate(grow, z, 10);
    FAIL("expected GuardViolation");
  } catch (const GuardViolation& e) {
    CHECK(e.step() == 4);
  }
}

TEST_CASE("structure validation") {
  IntegrabilityStructure s;
  s.dim = 2;
  s.fields.push_back(VectorField::generic("v", 2, [](auto, auto o) {
    o[0] = 1.0;
    o[1] = 0.0;
  }));
  CHECK_THROWS_AS(s.validate(), DimensionError);
  s.partial = true;
  CHECK_NOTHROW(s.validate());
  s.integrals.push_back(ScalarField::generic("F", 3, [](auto x) { return x[1]; }));
  CHECK_THROWS_AS(s.validate(), DimensionError);
}

TEST_CASE("scalar field gradient by jets and by differences") {
  const auto F = ScalarField::generic("F", 2, [](auto x) { return x[0] * x[0] * x[1]; });
  const std::vector<double> p{2.0, 3.0};
  const auto g = F.gradient(p);
  CHECK(g[0] == doctest::Approx(12.0));
  CHECK(g[1] == doctest::Approx(4.0));
  const auto gf = F.gradient(p, DerivativeMode::finite_difference);
  CHECK(gf[0] == doctest::Approx(12.0).epsilon(1e-7));
}
