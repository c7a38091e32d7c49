#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dynint/catalog/catalog.hpp"
#include "dynint/certify/certify.hpp"
#include "dynint/certify/residuals.hpp"
#include "dynint/constructions/constructions.hpp"

using namespace dynint;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return v; }

SmoothMap identity_map(std::size_t n) {
  return SmoothMap(VectorFunction::generic("id", n, n, [](auto x, auto o) {
    for (std::size_t i = 0; i < x.size(); ++i) o[i] = x[i];
  }));
}

VectorField affine_field(double shift) {
  return VectorField::generic("v", 1, [shift](auto x, auto o) { o[0] = x[0] + shift; });
}

}  // namespace

TEST_CASE("lie bracket examples and algebraic properties") {
  const auto A = linear_field("A", DenseMatrix{{0, 1}, {0, 0}});
  const auto B = linear_field("B", DenseMatrix{{1, 0}, {0, 2}});
  const auto x = pt({1, 1});
  const auto r = lie_bracket_residual(A, B, x);
  CHECK(r[0] == -1.0);
  CHECK(r[1] == 0.0);
  const auto rr = lie_bracket_residual(B, A, x);
  CHECK(rr[0] == -r[0]);
  CHECK(rr[1] == -r[1]);
  CHECK(norm_inf(lie_bracket_residual(A, A, x)) == 0.0);
  const auto A2 = linear_field("2A", DenseMatrix{{0, 2}, {0, 0}});
  CHECK(lie_bracket_residual(A2, B, x)[0] == 2.0 * r[0]);

  const auto v1 = linear_field("v1", DenseMatrix{{2, 0}, {1, 2}});
  const auto v2 = linear_field("v2", DenseMatrix{{0, 0}, {1, 0}});
  CHECK(norm_inf(lie_bracket_residual(v1, v2, pt({0.3, -1.7}))) == 0.0);
}

TEST_CASE("first integral residual examples") {
  const auto rot = VectorField::generic("rot", 2, [](auto x, auto o) {
    o[0] = -x[1];
    o[1] = x[0];
  });
  const auto F = ScalarField::generic("r2", 2, [](auto x) { return x[0] * x[0] + x[1] * x[1]; });
  CHECK(std::fabs(first_integral_residual(F, rot, pt({0.4, 2.5}))) < 1e-15);
  const auto c = ScalarField::generic("c", 2, [](auto) { return 7.0; });
  CHECK(first_integral_residual(c, rot, pt({1, 2})) == 0.0);
  const auto e1 = VectorField::generic("e1", 2, [](auto, auto o) {
    o[0] = 1.0;
    o[1] = 0.0;
  });
  const auto x1 = ScalarField::generic("x1", 2, [](auto x) { return x[0]; });
  CHECK(first_integral_residual(x1, e1, pt({3, 4})) == 1.0);
}

TEST_CASE("map invariance examples") {
  const auto F = ScalarField::generic("F", 2, [](auto x) { return x[0] * x[1]; });
  CHECK(map_invariance_residual(F, identity_map(2), pt({2, 3})) == 0.0);
  const SmoothMap ly = lyness_map(2, 1.0);
  const auto F1 = lyness_integrals(2, 1.0)[0];
  CHECK(F1(pt({1, 1})) == 12.0);
  CHECK(F1(pt({1, 2})) == 12.0);
  CHECK(map_invariance_residual(F1, ly, pt({1, 1})) == 0.0);
  const auto cat = build("cat_map");
  const auto x1 = ScalarField::generic("x1", 2, [](auto x) { return x[0]; });
  CHECK(map_invariance_residual(x1, cat.map, pt({0.2, 0.4})) == doctest::Approx(0.6));
}

TEST_CASE("infinitesimal commutation examples") {
  const SmoothMap f = affine1d_map(2.0, 3.0);
  CHECK(infinitesimal_commutation_residual(f, affine_field(3.0), pt({1}))[0] == 0.0);
  CHECK(infinitesimal_commutation_residual(f, affine_field(2.0), pt({1}))[0] == -1.0);
  CHECK(norm_inf(infinitesimal_commutation_residual(identity_map(2), linear_field("B", DenseMatrix{{1, 2}, {3, 4}}),
                                                    pt({0.5, 0.25}))) == 0.0);
}

TEST_CASE("flow commutation examples") {
  const SmoothMap f = affine1d_map(2.0, 3.0);
  CHECK(std::fabs(flow_commutation_residual(f, affine_field(3.0), pt({1}), 1.0)[0]) < 1e-7);
  const double e = std::numbers::e;
  CHECK(flow_commutation_residual(f, affine_field(2.0), pt({1}), 1.0)[0] == doctest::Approx(1.0 - e).epsilon(1e-8));

  const auto rot = build("rigid_rotation", {{"a", "2.5"}});
  for (double t : {-3.0, 0.5, 4.0})
    CHECK(norm_inf(flow_commutation_residual(rot.map, rot.structure->fields[0], pt({6.0}), t)) < 1e-9);
}

TEST_CASE("flow branch errors name the failing trajectory") {
  SmoothMap f(VectorFunction::generic("shift", 1, 1, [](auto x, auto o) { o[0] = x[0] + 1.0; }), {},
              [](std::span<const double> x) { return x[0] < 2.5; });
  const auto X = VectorField::generic("radial", 1, [](auto x, auto o) { o[0] = x[0]; });
  try {
    flow_commutation_residual(f, X, pt({0.1}), 2.0);
    FAIL("expected FlowBranchError");
  } catch (const FlowBranchError& e) {
    CHECK(e.branch() == "phi_t(f(x))");
  }
}

TEST_CASE("poisson bracket: canonical pair, antisymmetry, Leibniz") {
  const auto q1 = ScalarField::generic("q1", 4, [](auto z) { return z[0]; });
  const auto p1 = ScalarField::generic("p1", 4, [](auto z) { return z[2]; });
  const auto z = pt({0.3, -0.2, 1.1, 0.7});
  CHECK(poisson_bracket(q1, p1, z) == 1.0);
  CHECK(poisson_bracket(p1, q1, z) == -1.0);
  const auto F = ScalarField::generic("F", 4, [](auto v) { return v[0] * v[2] + sin(v[1]) * v[3]; });
  const auto G = ScalarField::generic("G", 4, [](auto v) { return v[2] * v[2] + v[0] * v[1]; });
  const auto H = ScalarField::generic("H", 4, [](auto v) { return exp(v[3]) + v[0] * v[0] * v[2]; });
  const auto FG = ScalarField::generic("FG", 4, [F, G](auto v) {
    using T = std::decay_t<decltype(v[0])>;
    return F.eval<T>(v) * G.eval<T>(v);
  });
  CHECK(poisson_bracket(F, F, z) == 0.0);
  const double lhs = poisson_bracket(FG, H, z);
  const double rhs = F(z) * poisson_bracket(G, H, z) + G(z) * poisson_bracket(F, H, z);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("symplecticity examples") {
  CHECK(symplecticity_residual(identity_map(2), pt({0.1, 0.2})) == 0.0);
  const auto lifted = cotangent_lift(linear_map(DenseMatrix{{2}}));
  CHECK(symplecticity_residual(lifted.lifted, pt({0.7, -1.3})) < 1e-15);
  const SmoothMap stretch(VectorFunction::generic("s", 2, 2, [](auto z, auto o) {
    o[0] = 2.0 * z[0];
    o[1] = z[1];
  }));
  CHECK(symplecticity_residual(stretch, pt({1, 1})) == 1.0);
}

TEST_CASE("rank statistics") {
  SamplingRegion region{Vector(3, -1.0), Vector(3, 1.0), 0.0, {}, 200, 3};
  std::vector<VectorField> basis;
  for (std::size_t i = 0; i < 3; ++i)
    basis.push_back(VectorField::generic("e", 3, [i](auto, auto o) {
      for (auto& v : o) v = 0.0;
      o[i] = 1.0;
    }));
  const auto full = independence_rank_stats(basis, region, 200);
  CHECK(full.full_rank_fraction == 1.0);
  CHECK(full.stats.pass);
  std::vector<VectorField> dup{basis[0], basis[0]};
  const auto d = independence_rank_stats(dup, region, 200);
  CHECK(d.full_rank_fraction == 0.0);
  CHECK_FALSE(d.stats.pass);

  JordanBlockSpec spec{{{2.0, 2}}};
  const auto fam = linear_commutative_family(spec);
  SamplingRegion r2{Vector(2, -1.0), Vector(2, 1.0), 0.0, {}, 500, 42};
  CHECK(independence_rank_stats(fam.fields, r2, 500).full_rank_fraction >= 0.99);
}

TEST_CASE("certify_structure verdicts") {
  const auto twist = build("twist");
  SamplingRegion region = twist.region;
  region.sample_count = 300;
  const auto ok = certify_structure(twist.map, *twist.structure, region);
  CHECK(ok.verdict == Verdict::pass);
  for (const auto& c : ok.conditions)
    if (c.name.rfind("flow", 0) != 0) CHECK(c.max_abs <= 1e-12);

  IntegrabilityStructure broken = *twist.structure;
  broken.fields[0] = leak_component(broken.fields[0], 2, 0);
  const auto bad = certify_structure(twist.map, broken, region);
  CHECK(bad.verdict == Verdict::fail);
  REQUIRE_FALSE(bad.failing().empty());
  CHECK(bad.failing().front()->worst_point.size() == 4);

  CertificationOptions skip;
  skip.skip_flow = true;
  CHECK(certify_structure(twist.map, *twist.structure, region, {}, skip).verdict == Verdict::unverified);

  const auto ly = build("lyness");
  SamplingRegion lr = ly.region;
  lr.sample_count = 300;
  const auto lrep = certify_structure(ly.map, *ly.structure, lr);
  CHECK(lrep.verdict == Verdict::pass);
  CHECK(lrep.find("invariance[F1]") != nullptr);
  CHECK(lrep.find("gradient_rank") != nullptr);
  CHECK(std::find(lrep.empty_sections.begin(), lrep.empty_sections.end(), "brackets") != lrep.empty_sections.end());
}

TEST_CASE("verdict stability under a change of seed") {
  const auto lin = build("linear", {{"blocks", "2:2,0.5:1"}});
  SamplingRegion r = lin.region;
  r.sample_count = 200;
  const Tolerances tol;
  const auto a = certify_structure(lin.map, *lin.structure, r, tol);
  r.seed = 43;
  const auto b = certify_structure(lin.map, *lin.structure, r, tol);
  CHECK(a.verdict == Verdict::pass);
  CHECK(b.verdict == Verdict::pass);
  for (std::size_t i = 0; i < a.conditions.size(); ++i)
    CHECK(std::fabs(a.conditions[i].max_abs - b.conditions[i].max_abs) < 10 * a.conditions[i].tolerance);
}

TEST_CASE("tolerance validation and decide") {
  Tolerances t;
  t.ae_fraction = 0.2;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  CHECK(decide({}, false) == Verdict::unverified);
  ResidualStats s;
  s.pass = true;
  CHECK(decide({s}, false) == Verdict::pass);
  CHECK(decide({s}, true) == Verdict::unverified);
  s.pass = false;
  CHECK(decide({s}, true) == Verdict::fail);
}
